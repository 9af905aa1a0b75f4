"""Finite-difference Fokker-Planck baseline with delta subtraction.

The density solves p_t + (f p)_x = (g^2 p)_xx / 2 from a point mass at the
origin.  The singular initial condition is split off analytically: write
p = u + v where u solves the heat equation u_t = kappa u_xx / 2 from the
same point mass, so

    u(x, t) = (2 pi kappa t)^(-1/2) exp(-x^2 / (2 kappa t)),

and v starts from zero and satisfies the forced equation

    v_t + (f v)_x = (g^2 v)_xx / 2 + [ (g^2 - kappa) u ]_xx / 2 - [ f u ]_x.

v is discretized on the shared node lattice with v = 0 outside |x| <= Mk,
first-order in time, centered second-order in space, drift explicit and
diffusion implicit:

    A V^(n+1) = B V^n + F^n,
    A: diag 1 + (h/k^2) g^2(x_i),  off-diag -(h/2k^2) g^2(x_(i+-1))
    B: diag 1, super -(h/2k) f(x_(i+1)), sub +(h/2k) f(x_(i-1))

with F^n the centered discretization of the forcing at t = n h (F^0 = 0;
u is singular at t = 0 and v has not yet picked up any mass).  The march
follows V^(n+1) = (A^-1 B) V^n + A^-1 F^n: A is LU-factored once, the dense
propagator A^-1 B is precomputed before the loop, and each step is one
dense matrix-vector product plus one tridiagonal solve for the forcing.
The answer is U^N + V^N with U^N the heat kernel sampled at t = N h.
"""
from __future__ import annotations

import math
import warnings
from typing import Optional

import numpy as np
from scipy.linalg import lapack

from .errors import (
    HorizonRoundingWarning,
    InvalidParams,
    SingularTridiagonal,
    ZeroDiffusionAtNode,
)
from .grid import DensityVector, GridSpec
from .problems import SdeProblem


def heat_kernel_u(x, t: float, kappa: float = 1.0):
    """Heat kernel (2 pi kappa t)^(-1/2) exp(-x^2/(2 kappa t)) for t > 0."""
    if not t > 0:
        raise InvalidParams(f"t must be positive, got {t}")
    if not kappa > 0:
        raise InvalidParams(f"kappa must be positive, got {kappa}")
    xa = np.asarray(x, dtype=float)
    out = np.exp(-(xa * xa) / (2.0 * kappa * t)) / math.sqrt(2.0 * math.pi * kappa * t)
    return float(out) if np.ndim(x) == 0 else out


class TridiagonalLU:
    """Tridiagonal LU factorization, computed once and solved many times."""

    def __init__(self, lower: np.ndarray, diag: np.ndarray, upper: np.ndarray):
        lower = np.asarray(lower, dtype=float)
        diag = np.asarray(diag, dtype=float)
        upper = np.asarray(upper, dtype=float)
        self._n = diag.shape[0]
        if self._n < 3:
            # the LAPACK wrapper requires n >= 3; solve tiny systems directly
            if self._n == 1:
                if diag[0] == 0.0:
                    raise SingularTridiagonal("1x1 system with zero diagonal")
                self._factors = (diag[0],)
            else:
                det = diag[0] * diag[1] - upper[0] * lower[0]
                if det == 0.0:
                    raise SingularTridiagonal("singular 2x2 tridiagonal system")
                self._factors = (lower[0], diag[0], diag[1], upper[0], det)
            return
        dl, d, du, du2, ipiv, info = lapack.dgttrf(lower, diag, upper)
        if info != 0:
            raise SingularTridiagonal(
                f"tridiagonal LU factorization failed (LAPACK info = {info})"
            )
        self._factors = (dl, d, du, du2, ipiv)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve against one right-hand side vector or a matrix of columns."""
        if self._n == 1:
            return np.asarray(rhs, dtype=float) / self._factors[0]
        if self._n == 2:
            l0, d0, d1, u0, det = self._factors
            b = np.asarray(rhs, dtype=float)
            return np.stack([(d1 * b[0] - u0 * b[1]) / det, (d0 * b[1] - l0 * b[0]) / det])
        dl, d, du, du2, ipiv = self._factors
        x, info = lapack.dgttrs(dl, d, du, du2, ipiv, rhs)
        if info != 0:
            raise SingularTridiagonal(f"tridiagonal solve failed (LAPACK info = {info})")
        return x


class FpWorkspace:
    """Grid-bound matrices, factorization, and propagator for the stepper.

    Immutable after construction; the time loop in :func:`fp_solve` only
    reads from it.  ``dominance_margins`` holds, per row, the amount by
    which the diagonal of A exceeds the absolute off-diagonal sum
    (1 minus h/(2k^2) times the second difference of g^2).
    """

    def __init__(self, grid: GridSpec, problem: SdeProblem, kappa: float = 1.0):
        if not kappa > 0:
            raise InvalidParams(f"kappa must be positive, got {kappa}")
        self.grid = grid
        self.problem = problem
        self.kappa = kappa

        x = grid.nodes
        self.f_vals = np.asarray(problem.drift(x), dtype=float)
        g_vals = np.asarray(problem.diffusion(x), dtype=float)
        self.g2_vals = g_vals * g_vals
        bad = ~((self.g2_vals > 0) & np.isfinite(self.g2_vals))
        if bad.any():
            idx = int(np.argmax(bad))
            raise ZeroDiffusionAtNode(idx - grid.M, float(x[idx]))

        h, k = grid.h, grid.k
        self._r = h / (2.0 * k * k)
        self._s = h / (2.0 * k)

        self.a_diag = 1.0 + 2.0 * self._r * self.g2_vals
        self.a_lower = -self._r * self.g2_vals[:-1]  # A[i+1, i] uses the column node
        self.a_upper = -self._r * self.g2_vals[1:]   # A[i, i+1] likewise
        self.b_upper = -self._s * self.f_vals[1:]    # B[i, i+1]
        self.b_lower = self._s * self.f_vals[:-1]    # B[i+1, i]

        off_sum = np.zeros_like(self.a_diag)
        off_sum[1:] += np.abs(self.a_lower)
        off_sum[:-1] += np.abs(self.a_upper)
        self.dominance_margins = self.a_diag - off_sum

        self.factorization = TridiagonalLU(self.a_lower, self.a_diag, self.a_upper)
        self.propagator = self.factorization.solve(self._b_dense())

    def _b_dense(self) -> np.ndarray:
        n = self.grid.num_nodes
        B = np.zeros((n, n))
        np.fill_diagonal(B, 1.0)
        idx = np.arange(n - 1)
        B[idx, idx + 1] = self.b_upper
        B[idx + 1, idx] = self.b_lower
        return B

    def b_matvec(self, v: np.ndarray) -> np.ndarray:
        """Apply B directly: identity plus the explicit centered drift stencil."""
        fv = self.f_vals * v
        out = v.copy()
        out[1:] += self._s * fv[:-1]
        out[:-1] -= self._s * fv[1:]
        return out


def forcing_vector(n: int, workspace: FpWorkspace, problem: SdeProblem) -> np.ndarray:
    """Discretized forcing F^n at time t = n h (n >= 1).

    Component j is

        (h/2k^2) [ c u_(j-1) - 2 c u_j + c u_(j+1) ]  -  (h/2k) [ f u_(j+1) - f u_(j-1) ]

    with c = g^2 - kappa and u sampled at t = n h; out-of-range neighbors
    contribute zero, matching v = 0 outside the grid.
    """
    if n < 1:
        raise InvalidParams(f"forcing is defined for time index n >= 1, got {n}")
    grid = workspace.grid
    u = heat_kernel_u(grid.nodes, n * grid.h, workspace.kappa)
    cu = (workspace.g2_vals - workspace.kappa) * u
    fu = workspace.f_vals * u

    second = -2.0 * cu
    second[1:] += cu[:-1]
    second[:-1] += cu[1:]

    drift = np.zeros_like(fu)
    drift[:-1] += fu[1:]
    drift[1:] -= fu[:-1]

    return workspace._r * second - workspace._s * drift


def fp_solve(
    problem: SdeProblem,
    T: float,
    grid: GridSpec,
    kappa: float = 1.0,
    workspace: Optional[FpWorkspace] = None,
) -> DensityVector:
    """March the forced equation to t = T = N h and add back the heat kernel."""
    if abs(grid.N * grid.h - T) > 1e-9 * max(T, 1.0):
        warnings.warn(
            f"grid horizon N*h = {grid.N * grid.h:.6g} differs from requested T = {T:.6g}; "
            "using the grid horizon",
            HorizonRoundingWarning,
            stacklevel=2,
        )
    ws = workspace if workspace is not None else FpWorkspace(grid, problem, kappa)
    v = np.zeros(grid.num_nodes)
    for n in range(grid.N):
        v = ws.propagator @ v
        if n >= 1:
            v += ws.factorization.solve(forcing_vector(n, ws, problem))
    u_final = heat_kernel_u(grid.nodes, grid.N * grid.h, ws.kappa)
    return DensityVector(u_final + v, grid, time_index=grid.N)
