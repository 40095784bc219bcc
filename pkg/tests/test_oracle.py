import math

import pytest

from oswr.problem import Coefficients, FrequencyBox, TransmissionParams
from oswr.problem import TimeRelation
from oswr import closedform as cf
from oswr import oracle as oc
from oswr import symbol as sy


HEAT = Coefficients(nu=1.0)
PAPER = Coefficients(nu=1.0, a=1.0, c=1.0, b=0.0)


def paper_box(h, Ch=0.25):
    return FrequencyBox(math.pi, math.pi / (Ch * h), math.pi / 1.2, math.pi / h)


class TestTwoPointEquioscillation:
    def test_real_points_geometric_mean(self):
        assert oc.two_point_equioscillation_p(1 + 0j, 4 + 0j) == pytest.approx(2.0)

    def test_complex_pair(self):
        p = oc.two_point_equioscillation_p(1 + 1j, 5 + 2j)
        assert p == pytest.approx(math.sqrt(19 / 4), rel=1e-12)
        r1 = abs((1 + 1j - p) / (1 + 1j + p))
        r2 = abs((5 + 2j - p) / (5 + 2j + p))
        assert r1 == pytest.approx(r2, rel=1e-12)

    def test_swap_symmetry(self):
        a = oc.two_point_equioscillation_p(1 + 1j, 5 + 2j)
        b = oc.two_point_equioscillation_p(5 + 2j, 1 + 1j)
        assert a == b

    def test_invalid_pairs(self):
        with pytest.raises(ValueError):
            oc.two_point_equioscillation_p(2 + 1j, 2 + 5j)
        with pytest.raises(ValueError):
            # radicand negative: second point dominated
            oc.two_point_equioscillation_p(1 + 0j, 0.5 + 10j)


class TestOptimizeRobin:
    def test_near_degenerate_real_point(self):
        # box collapsed to an essentially single real z0 = x0: optimal p
        # is z0 itself with contraction near zero
        co = Coefficients(nu=1.0, a=2.0)
        eps = 1e-9
        box = FrequencyBox(1e-12, 2e-12, 1e-12, 2e-12)
        res = oc.optimize_robin(co, box, search=oc.SearchSpec(sampling=16))
        assert res.p == pytest.approx(2.0, rel=1e-4)
        assert res.delta < 1e-4

    def test_heat_matches_closed_form_and_improves(self):
        h = 0.01
        box = FrequencyBox(1.0, math.pi / h, 1.0, math.pi / h)
        closed = cf.robin_no_overlap(HEAT, box, h, TimeRelation.linear(1.0))
        res = oc.optimize_robin(HEAT, box)
        assert abs(res.p - closed.p) / closed.p < 0.10
        f_closed = sy.sup_abs_rho(HEAT, box,
                                  TransmissionParams("robin", p=closed.p)).value
        assert res.delta <= f_closed + 1e-12

    def test_ratio_improves_with_h(self):
        ratios = []
        for h in (0.02, 0.01, 0.005):
            box = FrequencyBox(1.0, math.pi / h, 1.0, math.pi / h)
            closed = cf.robin_no_overlap(HEAT, box, h, TimeRelation.linear(1.0))
            res = oc.optimize_robin(HEAT, box)
            ratios.append(abs(res.p / closed.p - 1.0))
        assert ratios[-1] < ratios[0]

    def test_overlap_beats_no_overlap(self):
        h = 0.005
        box = paper_box(h)
        d0 = oc.optimize_robin(PAPER, box, 0.0).delta
        dL = oc.optimize_robin(PAPER, box, 2 * h).delta
        assert dL < d0


class TestOptimizeVentcel:
    def test_beats_robin(self):
        box = paper_box(0.01)
        dr = oc.optimize_robin(PAPER, box).delta
        dv = oc.optimize_ventcel(PAPER, box).delta
        assert dv < dr

    def test_never_worse_than_closed_form(self):
        h = 0.01
        box = paper_box(h)
        closed = cf.ventcel_no_overlap(PAPER, box, h, TimeRelation.linear(0.25))
        f_closed = sy.sup_abs_rho(
            PAPER, box, TransmissionParams("ventcel", p=closed.p, q=closed.q)
        ).value
        res = oc.optimize_ventcel(PAPER, box)
        assert res.delta <= f_closed + 1e-12

    def test_tiny_q_limit_consistent_with_robin(self):
        # restricting the Ventcel objective to q ~ 0 reproduces the Robin value
        box = paper_box(0.02)
        rob = oc.optimize_robin(PAPER, box)
        f_ventcel_q0 = sy.sup_abs_rho(
            PAPER, box,
            TransmissionParams("ventcel", p=rob.p, q=1e-14)).value
        assert f_ventcel_q0 == pytest.approx(rob.delta, rel=1e-6)


class TestEquioscillation:
    def test_robin_two_point_equioscillation_at_optimum(self):
        box = paper_box(0.01)
        res = oc.optimize_robin(PAPER, box)
        assert res.report.m == 2
        assert res.report.relative_spread < 1e-3

    def test_ventcel_three_point_equioscillation_at_optimum(self):
        box = paper_box(0.01)
        res = oc.optimize_ventcel(PAPER, box)
        assert res.report.m == 3
        assert res.report.relative_spread < 1e-2

    def test_detuned_parameter_spreads(self):
        box = paper_box(0.01)
        res = oc.optimize_robin(PAPER, box)
        detuned = oc.equioscillation_report(
            PAPER, box, TransmissionParams("robin", p=2 * res.p))
        assert detuned.spread > res.report.spread

    def test_maxima_sorted_descending(self):
        box = paper_box(0.02)
        rep = oc.equioscillation_report(
            PAPER, box, TransmissionParams("robin", p=10.0))
        vals = [v for _, _, v in rep.maxima]
        assert vals == sorted(vals, reverse=True)


class TestStrictLocalMin:
    def test_true_at_optimum(self):
        box = paper_box(0.02)
        res = oc.optimize_robin(PAPER, box)
        assert oc.verify_strict_local_min(
            PAPER, box, TransmissionParams("robin", p=res.p), radius=1e-2)

    def test_false_away_from_optimum(self):
        box = paper_box(0.02)
        res = oc.optimize_robin(PAPER, box)
        assert not oc.verify_strict_local_min(
            PAPER, box, TransmissionParams("robin", p=1.5 * res.p), radius=1e-2)

    def test_ventcel_compass(self):
        box = paper_box(0.02)
        res = oc.optimize_ventcel(PAPER, box)
        assert oc.verify_strict_local_min(
            PAPER, box,
            TransmissionParams("ventcel", p=res.p, q=res.q), radius=2e-2)


class TestOverlapMonotonicity:
    def test_delta_nonincreasing_in_L(self):
        h = 0.01
        box = paper_box(h)
        deltas = [oc.optimize_robin(PAPER, box, L).delta
                  for L in (0.0, h, 2 * h, 4 * h)]
        for a, b in zip(deltas, deltas[1:]):
            assert b <= a + 1e-12


def test_hypothesis_violation_rejected():
    bad = FrequencyBox(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        oc.optimize_robin(HEAT, bad)
