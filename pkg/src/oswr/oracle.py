"""Numerical min-max solver for the transmission parameters.

Minimizes F(p[, q]) = sup |rho| over the frequency box by derivative-free
search, entirely independent of the asymptotic formulas, and reports
equioscillation diagnostics: at the optimum the largest boundary maxima
of |rho| coincide (two for Robin, three for Ventcel), which is the
defining property the closed-form analysis is built on.  Any strict local
minimum of F is known to be the global one, so a single bracketed search
suffices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .closedform import (robin_overlap_continuous, ventcel_no_overlap,
                         ventcel_overlap_continuous)
from .problem import (ROBIN, VENTCEL, Coefficients, FrequencyBox,
                      TimeRelation, TransmissionParams, check_hypothesis)
from .symbol import (boundary_pieces, constant_A, landmarks,
                     piece_local_maxima, sup_abs_rho, to_z)

__all__ = [
    "SearchSpec",
    "EquioscillationReport",
    "OracleResult",
    "optimize_robin",
    "optimize_ventcel",
    "equioscillation_report",
    "two_point_equioscillation_p",
    "verify_strict_local_min",
    "BracketError",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(RuntimeError):
    """The objective was monotone across the whole admissible bracket."""


@dataclass(frozen=True)
class SearchSpec:
    """Bracket and tolerance descriptor for the derivative-free searches."""

    bracket_factor: float = 16.0   # initial bracket is p0 * [1/f, f]
    max_expansions: int = 6        # bracket re-expansions before giving up
    log_tol: float = 1e-7          # golden-section tolerance on ln p, ln q
    outer_tol: float = 1e-6        # relative F change ending coordinate descent
    max_sweeps: int = 50
    sampling: int = 2048           # boundary nodes per curve


@dataclass(frozen=True)
class EquioscillationReport:
    """Local maxima of |rho| along the box boundary at fixed parameters.

    ``maxima`` is sorted by descending value; ``spread`` is max - min over
    the top ``m`` entries (two for Robin, three for Ventcel).
    """

    maxima: tuple[tuple[float, float, float], ...]  # (omega, k, value)
    spread: float
    m: int

    @property
    def relative_spread(self) -> float:
        top = self.maxima[0][2] if self.maxima else math.nan
        return self.spread / top if top else math.nan


@dataclass(frozen=True)
class OracleResult:
    p: float
    q: float
    delta: float
    report: EquioscillationReport
    evaluations: int


def _truncate_box(box: FrequencyBox, coeffs: Coefficients) -> FrequencyBox:
    """Finite stand-in for a box with infinite upper frequencies."""
    if box.finite:
        return box
    cap = 1e6 * max(1.0, box.omega_min, coeffs.nu * box.k_min**2)
    return FrequencyBox(omega_min=box.omega_min,
                        omega_max=cap if math.isinf(box.omega_max) else box.omega_max,
                        k_min=box.k_min,
                        k_max=cap if math.isinf(box.k_max) else box.k_max)


def _check_truncation(box_eff: FrequencyBox, coeffs: Coefficients, p: float,
                      L: float) -> None:
    # The unbounded-curve maximum sits near x ~ sqrt(p / ell); the cut-off
    # corner must lie well beyond it for the truncation to be harmless.
    if L <= 0.0:
        return
    ell = L / (2.0 * coeffs.nu)
    x_max = math.sqrt(p / ell)
    x_corner = 2.0 * coeffs.nu * box_eff.k_max
    if x_corner < 3.0 * x_max:
        raise RuntimeError(
            f"truncated box too small: corner x={x_corner:.3g} vs "
            f"equioscillation point x~{x_max:.3g}")


class _CountingObjective:
    def __init__(self, coeffs, box, template: TransmissionParams, sampling: int):
        self.coeffs = coeffs
        self.box = box
        self.template = template
        self.sampling = sampling
        self.count = 0

    def __call__(self, p: float, q: float) -> float:
        self.count += 1
        params = replace(self.template, p=p, q=q)
        return sup_abs_rho(self.coeffs, self.box, params,
                           sampling=self.sampling).value


def _golden_min(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimization on [a, b]; returns (argmin, min)."""
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while abs(b - a) > tol:
        if f1 > f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def _bracketed_line_min(f, x0: float, spec: SearchSpec) -> tuple[float, float]:
    """Minimize f(exp(t)) over t with automatic bracket expansion around ln x0.

    Raises BracketError when f stays monotone across the fully expanded
    range, reporting the endpoint values.
    """
    w = math.log(spec.bracket_factor)
    lo, hi = math.log(x0) - w, math.log(x0) + w
    for _ in range(spec.max_expansions + 1):
        ts = np.linspace(lo, hi, 9)
        vals = [f(t) for t in ts]
        imin = int(np.argmin(vals))
        if 0 < imin < len(ts) - 1:
            t, v = _golden_min(f, ts[imin - 1], ts[imin + 1], spec.log_tol)
            return t, v
        if imin == 0:
            lo -= 2.0 * w
        else:
            hi += 2.0 * w
    raise BracketError(
        f"objective monotone on [{math.exp(lo):.3g}, {math.exp(hi):.3g}]: "
        f"endpoint values {f(lo):.6g}, {f(hi):.6g}")


def _initial_robin_p(coeffs, box_eff, L):
    if L > 0.0:
        return robin_overlap_continuous(coeffs, box_eff, L).p
    lm = landmarks(coeffs, box_eff)
    z_far = max((lm.z3.z, lm.z4.z), key=abs)
    try:
        return two_point_equioscillation_p(lm.z_sw.z, z_far)
    except ValueError:
        return math.sqrt(abs(lm.z_sw.z) * abs(z_far))


def optimize_robin(coeffs: Coefficients, box: FrequencyBox, L: float = 0.0,
                   search: SearchSpec | None = None) -> OracleResult:
    """Best Robin parameter by golden-section search on ln p."""
    if not check_hypothesis(coeffs, box):
        raise ValueError("frequency box violates the low-frequency hypothesis")
    spec = search or SearchSpec()
    box_eff = _truncate_box(box, coeffs)
    template = TransmissionParams(kind=ROBIN, p=1.0, q=0.0, L=L)
    F = _CountingObjective(coeffs, box_eff, template, spec.sampling)
    p0 = _initial_robin_p(coeffs, box_eff, L)
    t_opt, f_opt = _bracketed_line_min(lambda t: F(math.exp(t), 0.0),
                                       p0, spec)
    p_opt = math.exp(t_opt)
    if not box.finite:
        _check_truncation(box_eff, coeffs, p_opt, L)
    params = replace(template, p=p_opt)
    report = equioscillation_report(coeffs, box_eff, params,
                                    sampling=spec.sampling)
    return OracleResult(p=p_opt, q=0.0, delta=f_opt, report=report,
                        evaluations=F.count)


def optimize_ventcel(coeffs: Coefficients, box: FrequencyBox, L: float = 0.0,
                     search: SearchSpec | None = None) -> OracleResult:
    """Best Ventcel pair by coordinate descent with golden-section line searches.

    Starts from the closed-form values.  Each outer sweep line-searches
    ln p, ln q and, because the min-max surface has kinked valleys not
    aligned with the axes, the two diagonal directions as well; ends when
    the objective changes by less than ``outer_tol`` relatively or after
    ``max_sweeps`` sweeps (best-so-far parameters are returned either way).
    """
    if not check_hypothesis(coeffs, box):
        raise ValueError("frequency box violates the low-frequency hypothesis")
    spec = search or SearchSpec()
    box_eff = _truncate_box(box, coeffs)
    template = TransmissionParams(kind=VENTCEL, p=1.0, q=1.0, L=L)
    F = _CountingObjective(coeffs, box_eff, template, spec.sampling)
    p, q = _initial_ventcel(coeffs, box_eff, L, F)
    f_prev = F(p, q)
    for _ in range(spec.max_sweeps):
        tp, _ = _bracketed_line_min(lambda t: F(math.exp(t), q), p, spec)
        p = math.exp(tp)
        tq, _ = _bracketed_line_min(lambda t: F(p, math.exp(t)), q, spec)
        q = math.exp(tq)
        td, _ = _diag_line_min(lambda t: F(p * math.exp(t), q * math.exp(t)), spec)
        p, q = p * math.exp(td), q * math.exp(td)
        td, f_now = _diag_line_min(lambda t: F(p * math.exp(t), q * math.exp(-t)),
                                   spec)
        p, q = p * math.exp(td), q * math.exp(-td)
        if abs(f_prev - f_now) <= spec.outer_tol * f_now:
            f_prev = f_now
            break
        f_prev = f_now
    if not box.finite:
        _check_truncation(box_eff, coeffs, p, L)
    params = replace(template, p=p, q=q)
    report = equioscillation_report(coeffs, box_eff, params,
                                    sampling=spec.sampling)
    return OracleResult(p=p, q=q, delta=f_prev, report=report,
                        evaluations=F.count)


def _diag_line_min(f, spec: SearchSpec) -> tuple[float, float]:
    """Line minimum of f(t) around t = 0 (diagonal moves stay local)."""
    w = math.log(spec.bracket_factor)
    ts = np.linspace(-w, w, 9)
    vals = [f(t) for t in ts]
    imin = int(np.argmin(vals))
    lo = ts[max(imin - 1, 0)]
    hi = ts[min(imin + 1, len(ts) - 1)]
    return _golden_min(f, lo, hi, spec.log_tol)


def _initial_ventcel(coeffs, box_eff, L, F):
    """Best of the closed-form candidates as the starting point."""
    cands: list[tuple[float, float]] = []
    if L > 0.0:
        cf = ventcel_overlap_continuous(coeffs, box_eff, L)
        cands.append((cf.p, cf.q))
    else:
        # reconstruct grid quantities from the box: kM = pi/h, wM = pi/dt
        h = math.pi / box_eff.k_max
        dt = math.pi / box_eff.omega_max
        for rel in (TimeRelation.linear(dt / h),
                    TimeRelation.quadratic(dt / (h * h))):
            cf = ventcel_no_overlap(coeffs, box_eff, h, rel)
            cands.append((cf.p, cf.q))
    A = constant_A(coeffs, box_eff)
    x_sw = A / 4.0
    p_gen = (x_sw**3 * coeffs.nu * box_eff.k_max) ** 0.25
    cands.append((p_gen, 2.0 * p_gen / (x_sw * box_eff.k_max)))
    cands = [(p, q) for p, q in cands if p > 0.0 and q > 0.0]
    return min(cands, key=lambda pq: F(pq[0], pq[1]))


def equioscillation_report(coeffs: Coefficients, box: FrequencyBox,
                           params: TransmissionParams,
                           sampling: int = 2048) -> EquioscillationReport:
    """All boundary local maxima of |rho| at the given parameters, sorted.

    Maxima mapping to the same z-plane point (mirror frequencies, shared
    corners) are merged before the top-m spread is formed.
    """
    box_eff = _truncate_box(box, coeffs)
    cands: list[tuple[float, float, float]] = []
    for piece in boundary_pieces(coeffs, box_eff):
        cands.extend(piece_local_maxima(coeffs, piece, params, sampling))
    cands.sort(key=lambda t: -t[2])
    merged: list[tuple[float, float, float]] = []
    merged_z: list[complex] = []
    for om, k, v in cands:
        z = to_z(coeffs, om, k)
        if any(abs(z - z2) <= 1e-4 * max(abs(z), abs(z2)) for z2 in merged_z):
            continue
        merged.append((om, k, v))
        merged_z.append(z)
    m = 2 if params.kind == ROBIN else 3
    top = [v for _, _, v in merged[:m]]
    spread = (max(top) - min(top)) if len(top) == m else math.inf
    return EquioscillationReport(maxima=tuple(merged), spread=spread, m=m)


def two_point_equioscillation_p(Z1: complex, Z2: complex) -> float:
    """The Robin parameter equalizing |rho0| at two generic points:

        p = sqrt((Re Z1 |Z2|^2 - Re Z2 |Z1|^2) / (Re Z2 - Re Z1)).

    The returned p is verified by direct evaluation to 1e-10 relative.
    """
    x1, x2 = Z1.real, Z2.real
    if x1 == x2:
        raise ValueError("points must have distinct real parts")
    radicand = (x1 * abs(Z2) ** 2 - x2 * abs(Z1) ** 2) / (x2 - x1)
    if radicand <= 0.0:
        raise ValueError(f"no equalizing parameter: radicand {radicand:.3g} <= 0")
    p = math.sqrt(radicand)
    r1 = abs((Z1 - p) / (Z1 + p))
    r2 = abs((Z2 - p) / (Z2 + p))
    if abs(r1 - r2) > 1e-10 * max(r1, r2):
        raise AssertionError("equioscillation identity failed to verify")
    return p


def verify_strict_local_min(coeffs: Coefficients, box: FrequencyBox,
                            params: TransmissionParams, radius: float,
                            sampling: int = 2048) -> bool:
    """Probe whether F strictly increases at compass perturbations.

    Two probes p(1 +- radius) for Robin, eight around (p, q) for Ventcel.
    Radii below roughly ten times the sampling tolerance are noise-limited
    and may return False spuriously.
    """
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    box_eff = _truncate_box(box, coeffs)

    def F(p: float, q: float) -> float:
        return sup_abs_rho(coeffs, box_eff, replace(params, p=p, q=q),
                           sampling=sampling).value

    f0 = F(params.p, params.q)
    if params.kind == ROBIN or params.q == 0.0:
        probes = [(params.p * (1.0 + radius), params.q),
                  (params.p * (1.0 - radius), params.q)]
    else:
        steps = (-radius, 0.0, radius)
        probes = [(params.p * (1.0 + dp), params.q * (1.0 + dq))
                  for dp in steps for dq in steps if (dp, dq) != (0.0, 0.0)]
    return all(F(pp, qq) > f0 for pp, qq in probes)
