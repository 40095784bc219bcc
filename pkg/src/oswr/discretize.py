"""Monodomain space-time discretization.

Second-order central finite differences on a uniform grid (5-point stencil
for a . grad u - nu lap u + b u) with homogeneous Dirichlet outer
boundary, marched either by backward Euler or by forward Euler.  Forward
Euler requires the diffusive stability bound dt <= h^2 / (4 nu).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .problem import Coefficients, GridSpec

__all__ = [
    "IMPLICIT",
    "EXPLICIT",
    "SpaceTimeField",
    "operator_matrix",
    "discretize_monodomain",
    "monodomain_reference",
    "dump_field",
    "load_field",
]

IMPLICIT = "implicit"          # backward Euler
EXPLICIT = "explicit"          # forward Euler (lumped-mass equivalent)
_MAGIC = b"OSWRFLD1"


def interior_shape(grid: GridSpec) -> tuple[int, int]:
    return grid.nx - 1, grid.ny - 1


def interior_coords(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Meshgrid (x, y) of the interior nodes, shaped like a field level."""
    x = np.arange(1, grid.nx) * grid.h
    y = np.arange(1, grid.ny) * grid.h
    return np.meshgrid(x, y, indexing="ij")


def _d1(n: int, h: float) -> sp.csr_matrix:
    return sp.diags([-1.0, 1.0], [-1, 1], shape=(n, n), format="csr") / (2.0 * h)


def _d2(n: int, h: float) -> sp.csr_matrix:
    return sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n),
                    format="csr") / (h * h)


def operator_matrix(coeffs: Coefficients, grid: GridSpec) -> sp.csr_matrix:
    """Spatial operator a u_x + c u_y - nu lap u + b u on interior nodes.

    Flattening is row-major with the x index slow: (i-1)*(ny-1) + (j-1).
    """
    nx, ny = interior_shape(grid)
    Ix, Iy = sp.identity(nx, format="csr"), sp.identity(ny, format="csr")
    A = (coeffs.nu * (sp.kron(_d2(nx, grid.h), Iy) + sp.kron(Ix, _d2(ny, grid.h)))
         + coeffs.a * sp.kron(_d1(nx, grid.h), Iy)
         + coeffs.c * sp.kron(Ix, _d1(ny, grid.h)))
    if coeffs.b:
        A = A + coeffs.b * sp.identity(nx * ny, format="csr")
    return A.tocsr()


class _ImplicitStepper:
    def __init__(self, coeffs: Coefficients, grid: GridSpec):
        self.grid = grid
        self.A = operator_matrix(coeffs, grid)
        n = self.A.shape[0]
        self._lu = splu((sp.identity(n, format="csc")
                         + grid.dt * self.A.tocsc()).tocsc())

    def step(self, u: np.ndarray, f_next: np.ndarray | None = None) -> np.ndarray:
        rhs = u if f_next is None else u + self.grid.dt * f_next
        return self._lu.solve(rhs)


class _ExplicitStepper:
    def __init__(self, coeffs: Coefficients, grid: GridSpec):
        if grid.dt > grid.h**2 / (4.0 * coeffs.nu) * (1.0 + 1e-12):
            raise ValueError(
                f"explicit scheme unstable: dt={grid.dt} exceeds "
                f"h^2/(4 nu)={grid.h**2 / (4 * coeffs.nu)}")
        self.grid = grid
        self.A = operator_matrix(coeffs, grid)

    def step(self, u: np.ndarray, f_cur: np.ndarray | None = None) -> np.ndarray:
        out = u - self.grid.dt * (self.A @ u)
        if f_cur is not None:
            out += self.grid.dt * f_cur
        return out


def discretize_monodomain(coeffs: Coefficients, grid: GridSpec, scheme: str):
    """Per-time-step update operator for the undecomposed problem."""
    if scheme == IMPLICIT:
        return _ImplicitStepper(coeffs, grid)
    if scheme == EXPLICIT:
        return _ExplicitStepper(coeffs, grid)
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass
class SpaceTimeField:
    """Field values on every time level, indexed (level, ix, iy) over interior nodes."""

    grid: GridSpec
    values: np.ndarray  # (nsteps+1, nx-1, ny-1)

    def level(self, m: int) -> np.ndarray:
        return self.values[m]

    def flat(self) -> np.ndarray:
        return self.values.reshape(self.values.shape[0], -1)


def _sample(fn, grid: GridSpec, t: float | None = None) -> np.ndarray:
    X, Y = interior_coords(grid)
    return np.asarray(fn(X, Y) if t is None else fn(X, Y, t), dtype=float)


def monodomain_reference(coeffs: Coefficients, grid: GridSpec, scheme: str,
                         initial: Callable | None = None,
                         source: Callable | None = None) -> SpaceTimeField:
    """Direct time-marching solve on the full grid; the SWR fixed-point target.

    ``initial`` is a callable (x, y) -> u0 and ``source`` a callable
    (x, y, t) -> f; both default to zero.
    """
    stepper = discretize_monodomain(coeffs, grid, scheme)
    nx, ny = interior_shape(grid)
    N = grid.nsteps
    vals = np.zeros((N + 1, nx * ny))
    if initial is not None:
        vals[0] = _sample(initial, grid).ravel()
    for m in range(N):
        if source is None:
            f = None
        else:
            t_eval = (m + 1) * grid.dt if scheme == IMPLICIT else m * grid.dt
            f = _sample(source, grid, t_eval).ravel()
        vals[m + 1] = stepper.step(vals[m], f)
    return SpaceTimeField(grid=grid, values=vals.reshape(N + 1, nx, ny))


def relative_l2_diff(a: SpaceTimeField, b: SpaceTimeField) -> float:
    """Relative discrete L2(space-time) distance between two fields."""
    num = np.linalg.norm(a.values - b.values)
    den = np.linalg.norm(b.values)
    return num / den if den > 0 else num


def dump_field(field: SpaceTimeField, path) -> None:
    """Flat binary dump: magic, dims, h, dt, then float64 values in C order."""
    nlev, ni, nj = field.values.shape
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<qqqdd", nlev, ni, nj, field.grid.h,
                             field.grid.dt))
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def load_field(path) -> tuple[np.ndarray, float, float]:
    """Read back a dumped field as (values, h, dt)."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise ValueError("not a field dump")
        nlev, ni, nj, h, dt = struct.unpack("<qqqdd", fh.read(40))
        vals = np.frombuffer(fh.read(), dtype="<f8").reshape(nlev, ni, nj)
    return vals, h, dt
