"""Fourier symbol of the interface iteration and its frequency-box geometry.

One application of the two-half-plane exchange damps the (omega, k) error
component by

    rho = (s - z)/(s + z) * exp(-L z / (2 nu)),
    z   = sqrt(x0^2 + 4 nu (nu k^2 + i (omega + c k))),
    s   = p + q (nu k^2 + i (omega + c k)),

with the square root taken with positive real part.  The module evaluates
rho, maps the frequency box into the z plane, walks its boundary curves,
and computes the geometric constants entering the closed-form parameter
formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .problem import (ROBIN, VENTCEL, Coefficients, FrequencyBox,
                      TransmissionParams)

__all__ = [
    "ZPoint",
    "Landmarks",
    "to_z",
    "rho",
    "rho0_at_z",
    "sup_abs_rho",
    "SupResult",
    "kbar",
    "phi",
    "constant_A",
    "ktilde1",
    "ktilde2",
    "landmarks",
    "boundary_pieces",
    "BoundaryPiece",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden ratio conjugate


class ZPoint(NamedTuple):
    """Point z = x + i y together with the frequency pair that produced it."""

    x: float
    y: float
    omega: float
    k: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def to_z(coeffs: Coefficients, omega, k):
    """Map (omega, k) to z with Re z >= 0, via the explicit component formulas.

    Using X = x0^2 + 4 nu^2 k^2 and Y = 4 nu (omega + c k),

        x = sqrt((sqrt(X^2 + Y^2) + X) / 2),   y = Y / (2 x),

    which satisfies x^2 - y^2 = X and 2 x y = Y exactly, avoiding any
    library branch choice.
    """
    omega = np.asarray(omega, dtype=float)
    k = np.asarray(k, dtype=float)
    X = coeffs.x0sq + 4.0 * coeffs.nu**2 * k * k
    Y = 4.0 * coeffs.nu * (omega + coeffs.c * k)
    r = np.hypot(X, Y)
    x = np.sqrt(0.5 * (r + X))
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(x > 0.0, Y / (2.0 * np.where(x > 0.0, x, 1.0)), 0.0)
    out = x + 1j * y
    if out.ndim == 0:
        return complex(out)
    return out


def _symbol_s(coeffs: Coefficients, omega, k, params: TransmissionParams):
    return params.p + params.q * (coeffs.nu * np.asarray(k, dtype=float) ** 2
                                  + 1j * (np.asarray(omega, dtype=float)
                                          + coeffs.c * np.asarray(k, dtype=float)))


class DegenerateDenominatorError(ZeroDivisionError):
    """Raised when s + z vanishes at the requested frequency."""


def rho(coeffs: Coefficients, omega, k, params: TransmissionParams):
    """Convergence factor at one or many frequency pairs.

    For p > 0, q >= 0, L >= 0 and a hypothesis-satisfying box the modulus
    is strictly below one.
    """
    if params.kind not in (ROBIN, VENTCEL):
        raise ValueError("rho is defined for Robin and Ventcel conditions")
    z = to_z(coeffs, omega, k)
    s = _symbol_s(coeffs, omega, k, params)
    den = s + z
    scalar = np.ndim(den) == 0
    if scalar and den == 0:
        raise DegenerateDenominatorError(f"s + z = 0 at omega={omega}, k={k}")
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        out = (s - z) / den * np.exp(-params.L * z / (2.0 * coeffs.nu))
    return complex(out) if scalar else out


def rho0_at_z(z, p: float, q: float = 0.0, nu: float = 1.0, x0sq: float = 0.0):
    """Overlap-free factor (s - z)/(s + z) expressed through z itself.

    For q != 0 the symbol s is recovered from z via s = p + q (z^2 - x0^2)/(4 nu).
    """
    z = np.asarray(z, dtype=complex)
    s = p + q * (z * z - x0sq) / (4.0 * nu)
    return (s - z) / (s + z)


def _abs_rho_vector(coeffs, params):
    def f(omega, k):
        return np.abs(rho(coeffs, omega, k, params))
    return f


def _abs_rho_scalar(coeffs: Coefficients, params: TransmissionParams):
    """Closure computing |rho| at a single frequency pair with plain math.

    Orders of magnitude faster than the array path for the golden-section
    refinement loops.
    """
    nu, c, x0sq = coeffs.nu, coeffs.c, coeffs.x0sq
    p, q, L = params.p, params.q, params.L
    half_l = L / (2.0 * nu)

    def f(omega: float, k: float) -> float:
        X = x0sq + 4.0 * nu * nu * k * k
        Y = 4.0 * nu * (omega + c * k)
        r = math.hypot(X, Y)
        x = math.sqrt(0.5 * (r + X))
        y = Y / (2.0 * x) if x > 0.0 else 0.0
        sr = p + q * nu * k * k
        si = q * (omega + c * k)
        den = math.hypot(sr + x, si + y)
        if den == 0.0:
            return math.inf
        val = math.hypot(sr - x, si - y) / den
        if half_l:
            val *= math.exp(-half_l * x) if half_l * x < 745.0 else 0.0
        return val

    return f


# ---------------------------------------------------------------------------
# constants of the closed-form analysis


def kbar(coeffs: Coefficients, omega_min: float) -> float:
    """Wavenumber of the vertical-tangent point on the low-frequency curve.

        kbar = |c| (sqrt((c^2+x0^2)^2 + 16 nu^2 w^2) - (c^2+x0^2)) / (8 nu^2 w)

    and 0 <= kbar |c| <= omega_min always.  The w -> 0 limit is
    |c| w / (c^2 + x0^2), used below the cancellation threshold.
    """
    if coeffs.c == 0.0:
        return 0.0
    S = coeffs.c**2 + coeffs.x0sq
    nu2 = coeffs.nu**2
    if omega_min <= 1e-8 * S / coeffs.nu:
        return abs(coeffs.c) * omega_min / S
    root = math.sqrt(S * S + 16.0 * nu2 * omega_min**2)
    return abs(coeffs.c) * (root - S) / (8.0 * nu2 * omega_min)


def phi(coeffs: Coefficients, k: float, xi: float) -> float:
    """2 sqrt(2) sqrt(sqrt((x0^2+4 nu^2 k^2)^2 + 16 nu^2 xi^2) + x0^2 + 4 nu^2 k^2)."""
    X = coeffs.x0sq + 4.0 * coeffs.nu**2 * k * k
    return 2.0 * math.sqrt(2.0) * math.sqrt(math.hypot(X, 4.0 * coeffs.nu * xi) + X)


def constant_A(coeffs: Coefficients, box: FrequencyBox) -> float:
    """Low-frequency constant A: four times the smallest Re z on the box.

    Three-case selection on k_min against kbar and omega_min/|c|; for c = 0
    the middle case applies for every k_min.
    """
    km, wm = box.k_min, box.omega_min
    kb = kbar(coeffs, wm)
    ac = abs(coeffs.c)
    if km <= kb:
        return phi(coeffs, kb, -wm + ac * kb)
    if ac == 0.0 or km <= wm / ac:
        return phi(coeffs, km, -wm + ac * km)
    return phi(coeffs, km, 0.0)


def ktilde1(coeffs: Coefficients, omega: float) -> float:
    """Wavenumber of the vertical tangent of the constant-omega curve."""
    return _ktilde(coeffs, omega, -1.0)


def ktilde2(coeffs: Coefficients, omega: float) -> float:
    """Wavenumber of the horizontal tangent of the constant-omega curve."""
    return _ktilde(coeffs, omega, +1.0)


def _ktilde(coeffs: Coefficients, omega: float, sign: float) -> float:
    if omega <= 0.0:
        raise ValueError("tangent wavenumbers require omega > 0")
    if coeffs.c == 0.0:
        return 0.0
    S = coeffs.x0sq + coeffs.c**2
    root = math.sqrt(S * S + 16.0 * coeffs.nu**2 * omega * omega)
    return coeffs.c * (S + sign * root) / (8.0 * coeffs.nu**2 * omega)


def tangent_polynomial(coeffs: Coefficients, omega: float, kc: float) -> float:
    """Quadratic in k c whose roots are c*ktilde1 and c*ktilde2."""
    return (4.0 * coeffs.nu**2 / coeffs.c**2 * omega * kc * kc
            - (coeffs.c**2 + coeffs.x0sq) * kc - omega * coeffs.c**2)


# ---------------------------------------------------------------------------
# boundary of the transformed frequency box


@dataclass(frozen=True)
class BoundaryPiece:
    """One parameterized arc of the boundary of the transformed box.

    ``param`` is the free frequency (|omega| or |k|); ``to_freq`` maps a
    parameter array to signed (omega, k) arrays.
    """

    name: str
    lo: float
    hi: float
    to_freq: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

    def sample(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        t = _geom_nodes(self.lo, self.hi, n)
        return self.to_freq(t)


def _geom_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """Log-spaced nodes on [lo, hi]; a zero endpoint is kept and padded."""
    if lo <= 0.0:
        inner = np.geomspace(max(hi * 1e-12, 1e-300), hi, n - 1)
        return np.concatenate([[lo], inner])
    return np.geomspace(lo, hi, n)


def _sgn(c: float) -> float:
    return -1.0 if c < 0.0 else 1.0


def boundary_pieces(coeffs: Coefficients, box: FrequencyBox) -> list[BoundaryPiece]:
    """Arcs covering the boundary of the upper-half transformed box.

    West/east arcs fix |k| at k_min/k_max, north fixes omega = omega_max,
    and the southern arcs carry the remaining low-|y| boundary.  Interval
    conventions follow the case analysis of the corner geometry; empty
    intervals are dropped.
    """
    wm, wM, km, kM = box.omega_min, box.omega_max, box.k_min, box.k_max
    sc = _sgn(coeffs.c)
    ac = abs(coeffs.c)
    pieces: list[BoundaryPiece] = []

    def fixed_k(kval):
        def f(t):
            return t, np.full_like(t, kval)
        return f

    def fixed_k_neg_omega(kval):
        def f(t):
            return -t, np.full_like(t, kval)
        return f

    def fixed_omega(wval, ksign):
        def f(t):
            return np.full_like(t, wval), ksign * t
        return f

    pieces.append(BoundaryPiece("west+", wm, wM, fixed_k(sc * km)))
    if max(wm, ac * km) < wM:
        pieces.append(BoundaryPiece("west-", max(wm, ac * km), wM,
                                    fixed_k(-sc * km)))
    if wm < min(ac * kM, wM):
        pieces.append(BoundaryPiece("east_low", wm, min(ac * kM, wM),
                                    fixed_k_neg_omega(sc * kM)))
    pieces.append(BoundaryPiece("east+", wm, wM, fixed_k(sc * kM)))
    if max(ac * kM, wm) < wM:
        pieces.append(BoundaryPiece("east-", max(ac * kM, wm), wM,
                                    fixed_k(-sc * kM)))
    pieces.append(BoundaryPiece("north", km, kM, fixed_omega(wM, sc)))
    if ac == 0.0 or km < wm / ac:
        hi = kM if ac == 0.0 else min(wm / ac, kM)
        pieces.append(BoundaryPiece("southwest", km, hi, fixed_omega(wm, -sc)))
    if ac > 0.0 and wM / ac < kM:
        pieces.append(BoundaryPiece("southeast", wM / ac, kM,
                                    fixed_omega(-wM, sc)))
    return pieces


def _tangent_candidates(coeffs: Coefficients,
                        box: FrequencyBox) -> list[tuple[float, float]]:
    """Interior tangent points that must be sampled explicitly."""
    out: list[tuple[float, float]] = []
    if coeffs.c == 0.0:
        return out
    k1 = ktilde1(coeffs, box.omega_min) if box.omega_min > 0 else 0.0
    ac = abs(coeffs.c)
    if box.omega_min > 0 and box.k_min <= abs(k1) <= min(box.omega_min / ac,
                                                         box.k_max):
        out.append((box.omega_min, k1))
    if math.isfinite(box.omega_max):
        k2 = ktilde2(coeffs, box.omega_max)
        if box.k_min <= abs(k2) <= box.k_max:
            out.append((box.omega_max, k2))
    return out


class SupResult(NamedTuple):
    value: float
    omega: float
    k: float


def _golden_max(f: Callable[[float], float], a: float, b: float,
                tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section maximization on [a, b]; returns (argmax, max)."""
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (abs(a) + abs(b)) + 1e-300:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def piece_local_maxima(coeffs: Coefficients, piece: BoundaryPiece,
                       params: TransmissionParams, n: int,
                       refine: bool = True,
                       max_refine: int = 8) -> list[tuple[float, float, float]]:
    """Local maxima of |rho| along one boundary arc as (omega, k, value).

    Discrete 3-point maxima on log-spaced samples; the ``max_refine``
    largest are sharpened by golden section on the arc parameter.
    Endpoints count as candidates.
    """
    if n < 3:
        raise ValueError("need at least 3 sample nodes per boundary segment")
    f_scalar = _abs_rho_scalar(coeffs, params)
    t = _geom_nodes(piece.lo, piece.hi, n)
    om, kk = piece.to_freq(t)
    vals = np.abs(rho(coeffs, om, kk, params))
    out: list[tuple[float, float, float]] = []
    out.append((float(om[0]), float(kk[0]), float(vals[0])))
    out.append((float(om[-1]), float(kk[-1]), float(vals[-1])))
    interior = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    if len(interior):
        order = interior[np.argsort(vals[interior])[::-1]]
        for rank, idx in enumerate(order):
            if refine and rank < max_refine:
                def g(tv: float) -> float:
                    o, kv = piece.to_freq(np.asarray(tv))
                    return f_scalar(float(o), float(kv))
                tm, vm = _golden_max(g, t[idx - 1], t[idx + 1])
                o, kv = piece.to_freq(np.asarray(tm))
                out.append((float(o), float(kv), vm))
            else:
                out.append((float(om[idx]), float(kk[idx]), float(vals[idx])))
    return out


def sup_abs_rho(coeffs: Coefficients, box: FrequencyBox,
                params: TransmissionParams, sampling: int = 2048,
                refine: bool = True) -> SupResult:
    """Supremum of |rho| over the box and the frequency pair attaining it.

    |rho| is the modulus of a function analytic in z, so the supremum over
    the box is attained on the boundary of the transformed region; only
    the boundary arcs plus the interior tangent points are scanned.
    """
    if sampling < 3:
        raise ValueError("need at least 3 sample nodes per boundary segment")
    best = SupResult(-math.inf, math.nan, math.nan)
    f_scalar = _abs_rho_scalar(coeffs, params)
    for piece in boundary_pieces(coeffs, box):
        for om, kk, val in piece_local_maxima(coeffs, piece, params, sampling,
                                              refine=refine):
            if val > best.value or (val == best.value
                                    and (om, kk) < (best.omega, best.k)):
                best = SupResult(val, om, kk)
    for om, kk in _tangent_candidates(coeffs, box):
        val = f_scalar(om, kk)
        if val > best.value:
            best = SupResult(val, om, kk)
    return best


# ---------------------------------------------------------------------------
# landmarks


@dataclass(frozen=True)
class Landmarks:
    """Corner and tangent points of the transformed box boundary."""

    z1: ZPoint
    z2: ZPoint
    z3: ZPoint
    z4: ZPoint
    ktilde1: float
    ktilde2: float
    z_sw: ZPoint
    z_n: ZPoint
    sw_at_equality: bool = False  # |c k_min| == omega_min exactly


def _zpoint(coeffs: Coefficients, omega: float, k: float) -> ZPoint:
    z = to_z(coeffs, omega, k)
    return ZPoint(z.real, z.imag, omega, k)


def landmarks(coeffs: Coefficients, box: FrequencyBox) -> Landmarks:
    """Corner points z1..z4 plus the extremal south-western/northern points.

    z_sw is the boundary point of smallest real part on the low-frequency
    side; 4 Re(z_sw) equals the constant A.  At |c k_min| == omega_min the
    corner branch is taken and flagged.
    """
    if not box.finite:
        raise ValueError("landmarks require a finite frequency box")
    wm, wM, km, kM = box.omega_min, box.omega_max, box.k_min, box.k_max
    sc = _sgn(coeffs.c)
    ac = abs(coeffs.c)
    z1 = _zpoint(coeffs, max(wm, ac * km), -sc * km)
    z2 = _zpoint(coeffs, -min(wM, ac * kM), sc * km)
    z3 = _zpoint(coeffs, wM, sc * kM)
    z4 = _zpoint(coeffs, wM, sc * km)

    kt1 = ktilde1(coeffs, wm) if wm > 0.0 else 0.0
    kt2 = ktilde2(coeffs, wM)

    z_sw = z1
    at_eq = ac > 0.0 and ac * km == wm
    if ac > 0.0 and ac * km < wm and km <= abs(kt1) <= wm / ac:
        z_sw = _zpoint(coeffs, wm, kt1)
    z_n = z4
    if km <= abs(kt2) <= kM:
        z_n = _zpoint(coeffs, wM, kt2)
    return Landmarks(z1=z1, z2=z2, z3=z3, z4=z4, ktilde1=kt1, ktilde2=kt2,
                     z_sw=z_sw, z_n=z_n, sw_at_equality=at_eq)
