"""Closed-form asymptotically optimized transmission parameters.

Implements the optimized Robin and Ventcel parameter formulas for the six
regimes (no overlap / continuous overlap / grid-proportional overlap,
each coupled with a linear or quadratic time-step relation), together
with the auxiliary scalars they depend on:

* d0, the real root of d^3 - 2 d^2 + 2 d - 2,
* the bump function g(t) with maximum g0 at t0, its upper inverse t2(Q),
* the comparison function P(Q) with its branch threshold g1 = g(tbar).

The asymptotic formulas can leave the predicted contraction delta outside
(0, 1) on coarse grids; results then carry ``valid=False`` instead of
raising, so parameter sweeps can traverse pre-asymptotic regimes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .problem import Coefficients, FrequencyBox, TimeRelation, check_hypothesis
from .symbol import constant_A

__all__ = [
    "OptimizedParams",
    "Regime",
    "d0",
    "t0",
    "g",
    "g0",
    "g1",
    "tbar",
    "t2",
    "P_of_Q",
    "constant_B",
    "robin_no_overlap",
    "robin_overlap_continuous",
    "robin_overlap_discrete",
    "ventcel_no_overlap",
    "ventcel_overlap_continuous",
    "ventcel_overlap_discrete",
    "optimized_params",
]


@dataclass(frozen=True)
class OptimizedParams:
    """Optimized (p, q) and the predicted contraction factor delta.

    ``valid`` is False when the asymptotic prediction leaves (0, 1); p and
    q are still usable as solver inputs in that pre-asymptotic regime.
    """

    p: float
    q: float
    delta: float
    valid: bool = True


@dataclass(frozen=True)
class Regime:
    """Overlap/time-coupling selector for the parameter formulas.

    overlap: "none", "continuous" or "discrete"; L is ignored for "none".
    """

    overlap: str
    L: float = 0.0
    time_relation: TimeRelation | None = None

    def __post_init__(self) -> None:
        if self.overlap not in ("none", "continuous", "discrete"):
            raise ValueError(f"unknown overlap regime {self.overlap!r}")
        if self.overlap in ("continuous", "discrete") and not self.L > 0.0:
            raise ValueError("overlapping regimes require L > 0")


def _bracketed_newton(f: Callable[[float], float], fp: Callable[[float], float],
                      lo: float, hi: float, tol: float = 1e-13) -> float:
    """Newton iteration kept inside a sign-changing bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("bracket does not contain a sign change")
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx * flo < 0.0:
            hi = x
        else:
            lo, flo = x, fx
        d = fp(x)
        step = fx / d if d != 0.0 else math.inf
        xn = x - step
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= tol * max(1.0, abs(xn)):
            return xn
        x = xn
    return x


def _bisect(f: Callable[[float], float], lo: float, hi: float,
            tol: float = 1e-14, max_iter: int = 200) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    if flo * f(hi) > 0.0:
        raise ValueError("bracket does not contain a sign change")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= tol * max(1.0, abs(mid)):
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def d0() -> float:
    """Unique real root of d^3 - 2 d^2 + 2 d - 2, about 1.543679."""
    return _bracketed_newton(lambda d: ((d - 2.0) * d + 2.0) * d - 2.0,
                             lambda d: (3.0 * d - 4.0) * d + 2.0,
                             1.0, 2.0, tol=1e-15)


def g(t: float) -> float:
    """(2 t - sqrt(t^2 + 1)) / (t^2 + 1)."""
    t2p1 = t * t + 1.0
    return (2.0 * t - math.sqrt(t2p1)) / t2p1


@lru_cache(maxsize=1)
def t0() -> float:
    """Argmax of g: sqrt(54 + 6 sqrt(33)) / 6."""
    return math.sqrt(54.0 + 6.0 * math.sqrt(33.0)) / 6.0


@lru_cache(maxsize=1)
def g0() -> float:
    """Maximum of g, about 0.3690."""
    return g(t0())


def t2(Q: float) -> float:
    """The root of g(t) = Q with t > t0, by bracketed bisection.

    Defined for 0 < Q < g0; the residual |g(t2) - Q| stays below 1e-12.
    """
    if not 0.0 < Q < g0():
        raise ValueError(f"t2 requires 0 < Q < g0 ~= {g0():.4f}, got {Q}")
    lo = t0()
    hi = 2.0 * lo
    while g(hi) >= Q:
        hi *= 2.0
    root = _bisect(lambda t: g(t) - Q, lo, hi, tol=1e-15)
    if abs(g(root) - Q) > 1e-12:
        raise ArithmeticError("t2 bisection failed to reach residual 1e-12")
    return root


def _h1(t: float) -> float:
    r = math.sqrt(t * t + 1.0)
    return math.sqrt(1.0 + r) * (1.0 / r + g(t))


def _h2(t: float) -> float:
    return 1.0 + g(t)


@lru_cache(maxsize=1)
def tbar() -> float:
    """Crossing point of the two northern comparison branches, about 2.5484."""
    root = _bisect(lambda t: _h1(t) - _h2(t), t0() + 0.05, 10.0)
    if abs(root - 2.5484) > 5e-3:
        warnings.warn(f"tbar={root:.6f} deviates from the expected 2.5484")
    return root


@lru_cache(maxsize=1)
def g1() -> float:
    """Branch threshold of P(Q): g evaluated at the crossing point, about 0.3148."""
    val = g(tbar())
    if abs(val - 0.3148) > 5e-4:
        warnings.warn(f"g1={val:.6f} deviates from the expected 0.3148")
    return val


def P_of_Q(Q: float) -> float:
    """Piecewise comparison value P(Q) for the Ventcel no-overlap case."""
    if Q <= 0.0:
        raise ValueError("P(Q) requires Q > 0")
    if Q >= g1():
        return 1.0 + Q
    t = t2(Q)
    r = math.sqrt(t * t + 1.0)
    return math.sqrt(1.0 + r) * (1.0 / r + Q)


def constant_B(coeffs: Coefficients, time_relation: TimeRelation) -> float:
    """High-frequency constant B of the Robin no-overlap formula.

    Linear coupling gives 2/(nu pi); quadratic coupling gives
    C sqrt(2 d)/(nu pi) with d = nu pi C_h and C = 1 below d0.
    """
    if time_relation.kind == "linear":
        return 2.0 / (coeffs.nu * math.pi)
    d = coeffs.nu * math.pi * time_relation.coeff
    C = _explicit_C(d)
    return C * math.sqrt(2.0 * d) / (coeffs.nu * math.pi)


def _explicit_C(d: float) -> float:
    if d < d0():
        return 1.0
    return math.sqrt((d + math.sqrt(1.0 + d * d)) / (1.0 + d * d))


def _finish(p: float, q: float, coeffs: Coefficients, A: float) -> OptimizedParams:
    delta = 1.0 - A / (2.0 * p) if p > 0.0 else math.nan
    return OptimizedParams(p=p, q=q, delta=delta,
                           valid=p > 0.0 and 0.0 < delta < 1.0)


def _require_hypothesis(coeffs: Coefficients, box: FrequencyBox) -> None:
    if not check_hypothesis(coeffs, box):
        raise ValueError("frequency box violates the low-frequency hypothesis")


def robin_no_overlap(coeffs: Coefficients, box: FrequencyBox, h: float,
                     time_relation: TimeRelation) -> OptimizedParams:
    """p = sqrt(A/(B h)), delta = 1 - sqrt(A B h)/2."""
    _require_hypothesis(coeffs, box)
    if not h > 0.0:
        raise ValueError("mesh size h must be positive")
    A = constant_A(coeffs, box)
    B = constant_B(coeffs, time_relation)
    p = math.sqrt(A / (B * h))
    delta = 1.0 - 0.5 * math.sqrt(A * B * h)
    return OptimizedParams(p=p, q=0.0, delta=delta, valid=0.0 < delta < 1.0)


def robin_overlap_continuous(coeffs: Coefficients, box: FrequencyBox,
                             L: float) -> OptimizedParams:
    """p = (nu A^2 / L)^(1/3) / 2, delta = 1 - A/(2p)."""
    _require_hypothesis(coeffs, box)
    if not L > 0.0:
        raise ValueError("overlap L must be positive")
    A = constant_A(coeffs, box)
    p = 0.5 * (coeffs.nu * A * A / L) ** (1.0 / 3.0)
    return _finish(p, 0.0, coeffs, A)


def robin_overlap_discrete(coeffs: Coefficients, box: FrequencyBox, L: float,
                           time_relation: TimeRelation) -> OptimizedParams:
    """Grid-proportional overlap: the linear coupling shrinks p by 2^(1/3)."""
    base = robin_overlap_continuous(coeffs, box, L)
    if time_relation.kind == "quadratic":
        return base
    A = constant_A(coeffs, box)
    p = base.p / 2.0 ** (1.0 / 3.0)
    return _finish(p, 0.0, coeffs, A)


def ventcel_no_overlap(coeffs: Coefficients, box: FrequencyBox, h: float,
                       time_relation: TimeRelation) -> OptimizedParams:
    """Three-case optimized (p, q) without overlap; delta = 1 - A/(2p)."""
    _require_hypothesis(coeffs, box)
    if not h > 0.0:
        raise ValueError("mesh size h must be positive")
    A = constant_A(coeffs, box)
    nu = coeffs.nu
    if time_relation.kind == "linear":
        Ch = time_relation.coeff
        if A * Ch / 8.0 <= 1.0:
            # branches coincide asymptotically at equality; use the first
            p = 0.5 * (nu * math.pi * A**3 / (4.0 * h)) ** 0.25
        else:
            P = P_of_Q(8.0 / (Ch * A))
            p = (nu * math.pi * A**2 / (2.0 * Ch * P * P * h)) ** 0.25
        q = 8.0 * p * h / (math.pi * A)
    else:
        d = nu * math.pi * time_relation.coeff
        C = _explicit_C(d)
        p = 0.5 * (nu * math.pi * A**3 / (4.0 * C * h)
                   * math.sqrt(2.0 / d)) ** 0.25
        q = 8.0 * C * p * h / (math.pi * A) * math.sqrt(d / 2.0)
    return _finish(p, q, coeffs, A)


def ventcel_overlap_continuous(coeffs: Coefficients, box: FrequencyBox,
                               L: float) -> OptimizedParams:
    """p = (nu A^4/(8 L))^(1/5) / 2, q = 4 (nu^2 L^3/(2 A^2))^(1/5)."""
    _require_hypothesis(coeffs, box)
    if not L > 0.0:
        raise ValueError("overlap L must be positive")
    A = constant_A(coeffs, box)
    nu = coeffs.nu
    p = 0.5 * (nu * A**4 / (8.0 * L)) ** 0.2
    q = 4.0 * (nu * nu * L**3 / (2.0 * A * A)) ** 0.2
    return _finish(p, q, coeffs, A)


def ventcel_overlap_discrete(coeffs: Coefficients, box: FrequencyBox, L: float,
                             time_relation: TimeRelation) -> OptimizedParams:
    """Grid-proportional overlap: linear coupling rescales (p, q) by 2^(-1/5), 2^(3/5)."""
    base = ventcel_overlap_continuous(coeffs, box, L)
    if time_relation.kind == "quadratic":
        return base
    A = constant_A(coeffs, box)
    p = base.p * 2.0 ** (-0.2)
    q = base.q * 2.0 ** 0.6
    return _finish(p, q, coeffs, A)


def optimized_params(coeffs: Coefficients, box: FrequencyBox, kind: str,
                     regime: Regime, h: float | None = None) -> OptimizedParams:
    """Dispatch to the regime-appropriate formula for ``kind`` in {robin, ventcel}."""
    if kind == "robin":
        if regime.overlap == "none":
            if h is None or regime.time_relation is None:
                raise ValueError("no-overlap regime needs h and a time relation")
            return robin_no_overlap(coeffs, box, h, regime.time_relation)
        if regime.overlap == "continuous":
            return robin_overlap_continuous(coeffs, box, regime.L)
        if regime.time_relation is None:
            raise ValueError("discrete overlap regime needs a time relation")
        return robin_overlap_discrete(coeffs, box, regime.L, regime.time_relation)
    if kind == "ventcel":
        if regime.overlap == "none":
            if h is None or regime.time_relation is None:
                raise ValueError("no-overlap regime needs h and a time relation")
            return ventcel_no_overlap(coeffs, box, h, regime.time_relation)
        if regime.overlap == "continuous":
            return ventcel_overlap_continuous(coeffs, box, regime.L)
        if regime.time_relation is None:
            raise ValueError("discrete overlap regime needs a time relation")
        return ventcel_overlap_discrete(coeffs, box, regime.L, regime.time_relation)
    raise ValueError(f"no closed-form parameters for kind {kind!r}")
