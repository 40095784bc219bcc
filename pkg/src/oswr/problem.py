"""Continuous problem description, grid descriptors and the frequency box.

The model equation is

    u_t + a u_x + c u_y - nu (u_xx + u_yy) + b u = f

on a rectangle, with homogeneous Dirichlet conditions on the outer
boundary.  Everything downstream (symbol evaluation, parameter formulas,
space-time solvers) is parameterized by the value types defined here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

__all__ = [
    "Coefficients",
    "TimeRelation",
    "GridSpec",
    "FrequencyBox",
    "TransmissionParams",
    "default_frequency_box",
    "check_hypothesis",
    "DIRICHLET",
    "ROBIN",
    "VENTCEL",
]

DIRICHLET = "dirichlet"
ROBIN = "robin"
VENTCEL = "ventcel"
_KINDS = (DIRICHLET, ROBIN, VENTCEL)


@dataclass(frozen=True)
class Coefficients:
    """PDE coefficients: diffusion nu > 0, advection (a, c), reaction b >= 0."""

    nu: float
    a: float = 0.0
    c: float = 0.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if not self.nu > 0.0:
            raise ValueError("diffusion coefficient nu must be positive")
        if self.b < 0.0:
            raise ValueError("reaction coefficient b must be nonnegative")

    @property
    def x0sq(self) -> float:
        """Squared real offset a^2 + 4*nu*b of the symbol square root."""
        return self.a * self.a + 4.0 * self.nu * self.b

    @property
    def x0(self) -> float:
        return math.sqrt(self.x0sq)


@dataclass(frozen=True)
class TimeRelation:
    """Coupling of the time step to the mesh: dt = coeff*h or dt = coeff*h^2."""

    kind: str  # "linear" or "quadratic"
    coeff: float

    def __post_init__(self) -> None:
        if self.kind not in ("linear", "quadratic"):
            raise ValueError(f"unknown time relation kind {self.kind!r}")
        if not self.coeff > 0.0:
            raise ValueError("time relation coefficient must be positive")

    @classmethod
    def linear(cls, coeff: float) -> "TimeRelation":
        return cls("linear", coeff)

    @classmethod
    def quadratic(cls, coeff: float) -> "TimeRelation":
        return cls("quadratic", coeff)

    def dt_for(self, h: float) -> float:
        if self.kind == "linear":
            return self.coeff * h
        return self.coeff * h * h


def _divides(length: float, h: float) -> bool:
    n = length / h
    return abs(n - round(n)) <= 1e-9 * max(1.0, abs(n))


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time grid on (0,Lx) x (0,Ly) x (0,T)."""

    h: float
    dt: float
    relation: TimeRelation
    Lx: float
    Ly: float
    T: float

    def __post_init__(self) -> None:
        if not (self.h > 0.0 and self.dt > 0.0):
            raise ValueError("h and dt must be positive")
        if not (self.Lx > 0.0 and self.Ly > 0.0 and self.T > 0.0):
            raise ValueError("domain extents must be positive")
        expected = self.relation.dt_for(self.h)
        if not math.isclose(self.dt, expected, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(
                f"dt={self.dt} inconsistent with relation ({expected} expected)"
            )
        if not (_divides(self.Lx, self.h) and _divides(self.Ly, self.h)):
            raise ValueError("h must divide Lx and Ly into integer cell counts")

    @classmethod
    def make(cls, h: float, relation: TimeRelation, Lx: float, Ly: float,
             T: float) -> "GridSpec":
        """Build a grid with dt derived from the relation."""
        return cls(h=h, dt=relation.dt_for(h), relation=relation,
                   Lx=Lx, Ly=Ly, T=T)

    @property
    def nx(self) -> int:
        """Cell count along x."""
        return round(self.Lx / self.h)

    @property
    def ny(self) -> int:
        return round(self.Ly / self.h)

    @property
    def nsteps(self) -> int:
        return max(1, round(self.T / self.dt))


@dataclass(frozen=True)
class FrequencyBox:
    """Rectangle [omega_min, omega_max] x [k_min, k_max] of relevant frequencies.

    omega_max and k_max may be +inf for the continuous overlap analysis.
    """

    omega_min: float
    omega_max: float
    k_min: float
    k_max: float

    def __post_init__(self) -> None:
        if self.omega_min < 0.0 or self.k_min < 0.0:
            raise ValueError("frequency bounds must be nonnegative")
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be smaller than omega_max")
        if not self.k_min < self.k_max:
            raise ValueError("k_min must be smaller than k_max")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.omega_max) and math.isfinite(self.k_max)


@dataclass(frozen=True)
class TransmissionParams:
    """Transmission operator descriptor: kind plus (p, q) and overlap width L."""

    kind: str
    p: float = 0.0
    q: float = 0.0
    L: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown transmission kind {self.kind!r}")
        if self.L < 0.0:
            raise ValueError("overlap width L must be nonnegative")
        if self.kind == ROBIN and self.q != 0.0:
            raise ValueError("Robin conditions require q == 0")
        if self.kind == VENTCEL and self.q < 0.0:
            raise ValueError("Ventcel conditions require q >= 0")
        if self.kind in (ROBIN, VENTCEL) and self.p < 0.0:
            raise ValueError("p must be nonnegative")
        if self.kind == DIRICHLET and self.L == 0.0:
            # Allowed so the non-convergence of the classical algorithm
            # without overlap can be demonstrated, but it will stagnate.
            warnings.warn("Dirichlet transmission without overlap does not converge",
                          stacklevel=2)


def default_frequency_box(grid: GridSpec) -> FrequencyBox:
    """Frequency rectangle resolved by the grid.

    Highest frequencies come from the mesh (pi/h in space, pi/dt in time),
    lowest from the geometry (pi/Ly tangentially, pi/T in time).
    """
    return FrequencyBox(
        omega_min=math.pi / grid.T,
        omega_max=math.pi / grid.dt,
        k_min=math.pi / grid.Ly,
        k_max=math.pi / grid.h,
    )


def check_hypothesis(coeffs: Coefficients, box: FrequencyBox) -> bool:
    """True iff x0^2 + 4 nu^2 k_min^2 > 0 or omega_min > 0.

    Under this condition Re z is bounded below by a positive constant on
    the whole box, which every optimization result relies on.
    """
    return coeffs.x0sq + 4.0 * coeffs.nu**2 * box.k_min**2 > 0.0 or box.omega_min > 0.0


def min_real_part_bound(coeffs: Coefficients, box: FrequencyBox) -> float:
    """Proven lower bound on Re z over the box.

    The two candidate values are sqrt(x0^2 + 4 nu^2 k_min^2) (real-axis
    touch point) and sqrt(2 nu omega_min) (pure time oscillation); their
    minimum is always a valid bound.
    """
    cand1 = math.sqrt(coeffs.x0sq + 4.0 * coeffs.nu**2 * box.k_min**2)
    cand2 = math.sqrt(2.0 * coeffs.nu * box.omega_min)
    return min(cand1, cand2)
