import math

import pytest

from oswr.problem import Coefficients, FrequencyBox, TimeRelation
from oswr import closedform as cf


HEAT = Coefficients(nu=1.0)
ADV = Coefficients(nu=1.0, a=1.0)
POINT_BOX = FrequencyBox(0.0, 1.0, 0.0, 1.0)       # A = 4 x0
HEAT_BOX = FrequencyBox(1.0, 1000.0, 1.0, 1000.0)  # A ~ 8.78947
LIN = TimeRelation.linear(1.0)


class TestScalarConstants:
    def test_d0_satisfies_cubic(self):
        d = cf.d0()
        assert abs(d**3 - 2 * d**2 + 2 * d - 2) < 1e-12
        assert 1.5 < d < 1.6

    def test_t0_value(self):
        assert cf.t0() == pytest.approx(1.567618292, abs=1e-8)

    def test_g0_is_max_of_g(self):
        assert cf.g0() == pytest.approx(0.3690, abs=5e-4)
        t = cf.t0()
        assert cf.g(t) >= cf.g(t * 0.999)
        assert cf.g(t) >= cf.g(t * 1.001)

    def test_tbar_and_g1(self):
        assert cf.tbar() == pytest.approx(2.5484, abs=5e-3)
        assert cf.g1() == pytest.approx(0.3148, abs=5e-4)
        assert cf.g(cf.tbar()) == pytest.approx(cf.g1(), rel=1e-12)

    def test_t2_inverts_g(self):
        q2 = cf.g(2.0)
        assert q2 == pytest.approx((4 - math.sqrt(5)) / 5, rel=1e-14)
        assert cf.t2(q2) == pytest.approx(2.0, rel=1e-10)
        q3 = cf.g(3.0)
        assert q3 == pytest.approx((6 - math.sqrt(10)) / 10, rel=1e-14)
        assert cf.t2(q3) == pytest.approx(3.0, rel=1e-10)
        assert abs(cf.g(cf.t2(0.2)) - 0.2) < 1e-12

    def test_t2_domain_errors(self):
        with pytest.raises(ValueError):
            cf.t2(0.0)
        with pytest.raises(ValueError):
            cf.t2(cf.g0() + 1e-3)

    def test_P_of_Q(self):
        assert cf.P_of_Q(0.3527864) == pytest.approx(1.3527864, rel=1e-12)
        q = (6 - math.sqrt(10)) / 10
        expect = math.sqrt(1 + math.sqrt(10)) * (1 / math.sqrt(10) + q)
        assert cf.P_of_Q(q) == pytest.approx(expect, rel=1e-9)
        assert cf.P_of_Q(q) == pytest.approx(1.224100, abs=5e-6)
        with pytest.raises(ValueError):
            cf.P_of_Q(-1.0)

    def test_P_continuous_at_threshold(self):
        eps = 1e-9
        below = cf.P_of_Q(cf.g1() - eps)
        above = cf.P_of_Q(cf.g1() + eps)
        assert below == pytest.approx(above, abs=1e-6)


class TestConstantB:
    def test_linear(self):
        assert cf.constant_B(HEAT, LIN) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_quadratic_below_threshold(self):
        # d = pi/4 < d0 so C = 1 (the stability-limit regime)
        B = cf.constant_B(HEAT, TimeRelation.quadratic(0.25))
        assert B == pytest.approx(math.sqrt(math.pi / 2) / math.pi, rel=1e-12)
        assert B == pytest.approx(0.398942, abs=1e-6)

    def test_quadratic_above_threshold(self):
        rel = TimeRelation.quadratic(2.0 / math.pi)  # d = 2 > d0
        C = math.sqrt((2 + math.sqrt(5)) / 5)
        assert cf.constant_B(HEAT, rel) == pytest.approx(C * 2 / math.pi,
                                                         rel=1e-12)


class TestRobin:
    def test_no_overlap_values(self):
        res = cf.robin_no_overlap(ADV, POINT_BOX, 0.01, LIN)
        assert res.p == pytest.approx(25.0663, abs=2e-4)
        assert res.delta == pytest.approx(0.920211, abs=1e-6)
        assert res.q == 0.0
        assert res.valid

    def test_no_overlap_heat_box(self):
        res = cf.robin_no_overlap(HEAT, HEAT_BOX, 0.01, LIN)
        A = 4 * math.sqrt(2 * (math.sqrt(2) + 1))
        assert res.p == pytest.approx(math.sqrt(A * math.pi / 0.02), rel=1e-9)

    def test_h_scaling_exact(self):
        p1 = cf.robin_no_overlap(ADV, POINT_BOX, 0.01, LIN).p
        p2 = cf.robin_no_overlap(ADV, POINT_BOX, 0.0025, LIN).p
        assert p2 / p1 == pytest.approx(2.0, rel=1e-13)

    def test_overlap_continuous_values(self):
        res = cf.robin_overlap_continuous(ADV, POINT_BOX, 0.01)
        assert res.p == pytest.approx(0.5 * 1600 ** (1 / 3), rel=1e-12)
        assert res.delta == pytest.approx(1 - 4 / (2 * res.p), rel=1e-12)

    def test_overlap_L_scaling(self):
        p1 = cf.robin_overlap_continuous(ADV, POINT_BOX, 0.08).p
        p2 = cf.robin_overlap_continuous(ADV, POINT_BOX, 0.01).p
        assert p2 / p1 == pytest.approx(2.0, rel=1e-13)

    def test_overlap_discrete_cases(self):
        quad = TimeRelation.quadratic(0.25)
        contL = cf.robin_overlap_continuous(ADV, POINT_BOX, 0.01)
        assert cf.robin_overlap_discrete(ADV, POINT_BOX, 0.01, quad) == contL
        lin = cf.robin_overlap_discrete(ADV, POINT_BOX, 0.01, LIN)
        assert lin.p == pytest.approx(contL.p / 2 ** (1 / 3), rel=1e-13)


class TestVentcel:
    def test_no_overlap_small_ACh(self):
        rel = TimeRelation.linear(0.25)  # A Ch / 8 = 0.125 < 1
        res = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01, rel)
        assert res.p == pytest.approx(0.5 * (64 * math.pi / 0.04) ** 0.25,
                                      rel=1e-12)
        assert res.q == pytest.approx(8 * res.p * 0.01 / (4 * math.pi),
                                      rel=1e-12)
        assert res.delta == pytest.approx(1 - 4 / (2 * res.p), rel=1e-12)

    def test_no_overlap_large_ACh_uses_P(self):
        rel = TimeRelation.linear(4.0)  # A Ch / 8 = 2 > 1
        res = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01, rel)
        P = cf.P_of_Q(8 / (4.0 * 4.0))
        expect = (math.pi * 16 / (2 * 4.0 * P * P * 0.01)) ** 0.25
        assert res.p == pytest.approx(expect, rel=1e-12)

    def test_no_overlap_quadratic(self):
        rel = TimeRelation.quadratic(0.25)
        res = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01, rel)
        d = math.pi * 0.25
        expect_p = 0.5 * (math.pi * 64 / (4 * 0.01) * math.sqrt(2 / d)) ** 0.25
        assert res.p == pytest.approx(expect_p, rel=1e-12)
        assert res.q == pytest.approx(
            8 * res.p * 0.01 / (4 * math.pi) * math.sqrt(d / 2), rel=1e-12)

    def test_h_scaling_fourth_root(self):
        rel = TimeRelation.linear(0.25)
        r1 = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01, rel)
        r2 = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01 / 16, rel)
        assert r2.p / r1.p == pytest.approx(2.0, rel=1e-13)
        # q = 8 p h / (pi A) scales as h^(3/4): factor 16^(-3/4) = 1/8
        assert r2.q / r1.q == pytest.approx(0.125, rel=1e-12)

    def test_overlap_continuous_values(self):
        res = cf.ventcel_overlap_continuous(ADV, POINT_BOX, 0.01)
        assert res.p == pytest.approx(0.5 * 3200 ** 0.2, abs=2e-4)
        assert res.q == pytest.approx(4 * (1e-6 / 32) ** 0.2, abs=2e-6)

    def test_overlap_L_power_laws(self):
        r1 = cf.ventcel_overlap_continuous(ADV, POINT_BOX, 0.32)
        r2 = cf.ventcel_overlap_continuous(ADV, POINT_BOX, 0.01)
        assert r2.p / r1.p == pytest.approx(2.0, rel=1e-13)
        assert r1.q / r2.q == pytest.approx(8.0, rel=1e-13)

    def test_overlap_discrete_cases(self):
        quad = TimeRelation.quadratic(0.25)
        cont = cf.ventcel_overlap_continuous(ADV, POINT_BOX, 0.01)
        assert cf.ventcel_overlap_discrete(ADV, POINT_BOX, 0.01, quad) == cont
        lin = cf.ventcel_overlap_discrete(ADV, POINT_BOX, 0.01, LIN)
        assert lin.p == pytest.approx(cont.p * 2 ** (-0.2), rel=1e-13)
        assert lin.q / cont.q == pytest.approx(2 ** 0.6, rel=1e-13)


class TestValidityFlag:
    def test_pre_asymptotic_delta_flagged_not_raised(self):
        # coarse overlap leaves the asymptotic prediction outside (0, 1)
        co = Coefficients(nu=1.0, a=1.0, c=1.0)
        box = FrequencyBox(math.pi, 1000.0, math.pi / 1.2, 1000.0)
        res = cf.ventcel_overlap_discrete(co, box, 0.04, LIN)
        assert res.delta <= 0.0
        assert not res.valid
        assert res.p > 0.0 and res.q > 0.0

    def test_hypothesis_violation_raises(self):
        with pytest.raises(ValueError):
            cf.robin_no_overlap(HEAT, POINT_BOX, 0.01, LIN)


def test_dispatch_matches_direct_calls():
    rel = TimeRelation.linear(0.25)
    direct = cf.ventcel_no_overlap(ADV, POINT_BOX, 0.01, rel)
    via = cf.optimized_params(ADV, POINT_BOX, "ventcel",
                              cf.Regime("none", time_relation=rel), h=0.01)
    assert via == direct
    directL = cf.robin_overlap_discrete(ADV, POINT_BOX, 0.02, rel)
    viaL = cf.optimized_params(ADV, POINT_BOX, "robin",
                               cf.Regime("discrete", L=0.02, time_relation=rel))
    assert viaL == directL
