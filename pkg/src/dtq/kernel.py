"""Quadrature time stepping for the density of a scalar SDE.

One explicit Euler step from state y has the Gaussian transition density

    G(x, y) = (2 pi g(y)^2 h)^(-1/2) exp( -(x - y - f(y) h)^2 / (2 g(y)^2 h) ),

so the density one temporal level later is the integral of G(x, y) p(y) dy.
Approximating that integral with the trapezoidal rule on the node lattice
x_j = j*k and truncating to |j| <= M turns each time step into a
matrix-vector product p^(n+1) = A p^n with A_ij = k * G(x_i, y_j).

The operator A can be assembled dense (serially or with a thread pool over
row blocks; both produce bitwise-identical matrices) or banded: because each
column of A is a sampled Gaussian, whole sub-diagonals fall below machine
precision once |i - j| * k is a few standard deviations, and dropping them
loses nothing.  The point-mass initial condition is handled analytically:
the first stored level is p(x, t_1) = G(x, C).
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse

from .errors import (
    BandwidthOverflow,
    GridCoverageWarning,
    GridMismatch,
    InvalidParams,
    StepConstraintWarning,
    ZeroDiffusion,
    ZeroDiffusionAtNode,
)
from .grid import DOMAIN_POLY_PI, DensityVector, GridSpec, select_grid
from .problems import SdeProblem

DROP_TOL_DEFAULT = 2.2e-16

_ASSEMBLY_MODES = ("dense-serial", "dense-parallel", "banded")
_ROW_CHUNK = 128


def gaussian_kernel(x, y: float, h: float, problem: SdeProblem):
    """Transition density G(x, y) of one explicit Euler step of size h.

    ``x`` may be a scalar or an array; ``y`` is the conditioning state.
    Raises ZeroDiffusion when g(y) = 0 (or g(y)^2 * h underflows), where the
    kernel would be singular.
    """
    if not h > 0:
        raise InvalidParams(f"h must be positive, got {h}")
    g = float(problem.diffusion(y))
    var = g * g * h
    if not (var > 0 and math.isfinite(var)):
        raise ZeroDiffusion(f"diffusion is zero at y = {y:.6g}")
    mean = y + float(problem.drift(y)) * h
    xa = np.asarray(x, dtype=float)
    out = np.exp(-((xa - mean) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    return float(out) if np.ndim(x) == 0 else out


def _node_coefficients(grid: GridSpec, problem: SdeProblem):
    """Drift and squared diffusion at every node, with the positivity check.

    The check is deliberately done here, at assembly time: diffusions like
    sech(x) are positive everywhere but underflow on wide enough grids.
    """
    x = grid.nodes
    f_vals = np.asarray(problem.drift(x), dtype=float)
    g_vals = np.asarray(problem.diffusion(x), dtype=float)
    var = g_vals * g_vals * grid.h
    bad = ~((var > 0) & np.isfinite(var))
    if bad.any():
        idx = int(np.argmax(bad))
        raise ZeroDiffusionAtNode(idx - grid.M, float(x[idx]))
    return f_vals, var


@dataclass
class KernelMatrix:
    """The (2M+1)x(2M+1) operator with entries k * G(x_i, y_j).

    Dense storage keeps the full array; banded storage keeps 2*bandwidth+1
    diagonals in a sparse matrix (entries outside the band are implicitly
    zero).  ``diagonals`` maps signed offsets (positive = super-diagonal) to
    the stored entries, for introspection.
    """

    grid: GridSpec
    assembly_mode: str
    dense: Optional[np.ndarray] = None
    sparse: Optional[scipy.sparse.spmatrix] = None
    bandwidth: Optional[int] = None
    bandwidth_overflow: bool = False
    diagonals: Optional[dict[int, np.ndarray]] = None

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self.dense is not None:
            return self.dense @ v
        return self.sparse @ v

    def toarray(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        return self.sparse.toarray()


def _fill_rows(out, x, mean, denom, colpref, lo, hi):
    out[lo:hi] = colpref * np.exp(-((x[lo:hi, None] - mean[None, :]) ** 2) / denom)


def assemble_dense(grid: GridSpec, problem: SdeProblem, parallel: bool = False) -> KernelMatrix:
    """Assemble the full kernel matrix.

    With ``parallel=True`` the row blocks are computed by a thread pool; the
    blocks and the per-block arithmetic are identical to the serial path, so
    the result is bitwise independent of the degree of parallelism.
    """
    f_vals, var = _node_coefficients(grid, problem)
    x = grid.nodes
    mean = x + f_vals * grid.h
    denom = (2.0 * var)[None, :]
    colpref = (grid.k / np.sqrt(2.0 * math.pi * var))[None, :]

    n = grid.num_nodes
    out = np.empty((n, n))
    bounds = [(lo, min(lo + _ROW_CHUNK, n)) for lo in range(0, n, _ROW_CHUNK)]
    if parallel:
        with ThreadPoolExecutor() as pool:
            list(pool.map(lambda b: _fill_rows(out, x, mean, denom, colpref, *b), bounds))
    else:
        for b in bounds:
            _fill_rows(out, x, mean, denom, colpref, *b)
    mode = "dense-parallel" if parallel else "dense-serial"
    return KernelMatrix(grid=grid, assembly_mode=mode, dense=out)


def assemble_banded(
    grid: GridSpec, problem: SdeProblem, drop_tol: float = DROP_TOL_DEFAULT
) -> KernelMatrix:
    """Assemble the kernel matrix diagonal by diagonal, dropping the tail.

    Writing i = j + d, the entries along the d-th sub-diagonal are

        A_(j+d, j) = k (2 pi g^2(y_j) h)^(-1/2) exp( -(d k - f(y_j) h)^2 / (2 g^2(y_j) h) ),

    computed for d = 0, 1, 2, ... until the 1-norm of a sub-diagonal drops
    below ``drop_tol`` times the 1-norm of the main diagonal; that
    sub-diagonal is dropped and the same number of super-diagonals
    (d negative above) is then computed.  If no sub-diagonal up to d = 2M
    satisfies the drop rule, the full-band matrix is returned and flagged.
    """
    if not drop_tol > 0:
        raise InvalidParams(f"drop_tol must be positive, got {drop_tol}")
    f_vals, var = _node_coefficients(grid, problem)
    h, k, n = grid.h, grid.k, grid.num_nodes
    pref = k / np.sqrt(2.0 * math.pi * var)
    fh = f_vals * h
    denom = 2.0 * var

    def sub_diag(d):
        # columns j = 0 .. n-1-d feed rows j+d
        sl = slice(0, n - d)
        return pref[sl] * np.exp(-((d * k - fh[sl]) ** 2) / denom[sl])

    def super_diag(d):
        # columns j = d .. n-1 feed rows j-d; the offset enters with opposite sign
        sl = slice(d, n)
        return pref[sl] * np.exp(-((d * k + fh[sl]) ** 2) / denom[sl])

    main = sub_diag(0)
    threshold = drop_tol * float(main.sum())

    subs = []
    overflow = True
    for d in range(1, n):
        cand = sub_diag(d)
        if float(cand.sum()) < threshold:
            overflow = False
            break
        subs.append(cand)
    if overflow:
        warnings.warn(
            f"no sub-diagonal up to d = {n - 1} fell below drop_tol = {drop_tol:g}; "
            "keeping the full bandwidth",
            BandwidthOverflow,
            stacklevel=2,
        )

    b = len(subs)
    diagonals = {0: main}
    for d, vals in enumerate(subs, start=1):
        diagonals[-d] = vals
    for d in range(1, b + 1):
        diagonals[d] = super_diag(d)

    offsets = sorted(diagonals)
    sparse = scipy.sparse.diags(
        [diagonals[o] for o in offsets], offsets, shape=(n, n), format="csr"
    )
    return KernelMatrix(
        grid=grid,
        assembly_mode="banded",
        sparse=sparse,
        bandwidth=b,
        bandwidth_overflow=overflow,
        diagonals=diagonals,
    )


def assemble(
    grid: GridSpec,
    problem: SdeProblem,
    assembly_mode: str = "dense-serial",
    drop_tol: float = DROP_TOL_DEFAULT,
) -> KernelMatrix:
    if assembly_mode == "dense-serial":
        return assemble_dense(grid, problem, parallel=False)
    if assembly_mode == "dense-parallel":
        return assemble_dense(grid, problem, parallel=True)
    if assembly_mode == "banded":
        return assemble_banded(grid, problem, drop_tol)
    raise InvalidParams(
        f"unknown assembly mode {assembly_mode!r}; expected one of {_ASSEMBLY_MODES}"
    )


def initial_density(grid: GridSpec, problem: SdeProblem) -> DensityVector:
    """First stored time level: one analytic Euler step from the point mass.

    p(x, t_1) = G(x, C), which sidesteps discretizing the delta function.
    """
    C = problem.initial_point
    values = gaussian_kernel(grid.nodes, C, grid.h, problem)
    return DensityVector(values, grid, time_index=1)


def step(density: DensityVector, kernel: KernelMatrix) -> DensityVector:
    """Advance one temporal level: p^(n+1) = A p^n."""
    if density.grid != kernel.grid:
        raise GridMismatch("density and kernel were built on different grids")
    return DensityVector(kernel.matvec(density.values), density.grid, density.time_index + 1)


def _coverage_warnings(grid: GridSpec, problem: SdeProblem) -> None:
    C = problem.initial_point
    if abs(C) > grid.y_M / 2.0:
        warnings.warn(
            f"initial point C = {C:.6g} lies in the outer half of the grid "
            f"[-{grid.y_M:.6g}, {grid.y_M:.6g}]; the domain rules assume mass near 0",
            GridCoverageWarning,
            stacklevel=3,
        )
    g_min = float(np.min(np.abs(problem.diffusion(grid.nodes))))
    limit = 2.0 * math.pi / math.sqrt(math.log(2.0)) * g_min * math.sqrt(grid.h)
    if grid.k > limit:
        warnings.warn(
            f"k = {grid.k:.4g} exceeds 2*pi*(log 2)^(-1/2)*min|g|*sqrt(h) = {limit:.4g}; "
            "the one-step quadrature error bound does not apply (empirical behavior only)",
            StepConstraintWarning,
            stacklevel=3,
        )


def solve_on_grid(
    problem: SdeProblem,
    grid: GridSpec,
    assembly_mode: str = "dense-serial",
    drop_tol: float = DROP_TOL_DEFAULT,
) -> DensityVector:
    """Run the full quadrature iteration on an already-chosen grid.

    Assembles the kernel exactly once (the coefficients carry no time
    dependence) and applies it N-1 times to the analytic first level.
    """
    _coverage_warnings(grid, problem)
    kernel = assemble(grid, problem, assembly_mode, drop_tol)
    p = initial_density(grid, problem)
    for _ in range(grid.N - 1):
        p = step(p, kernel)
    return p


def evolve(
    problem: SdeProblem,
    T: float,
    h: float,
    rho: float = 0.75,
    r1: float = 1.0,
    domain_rule: str = DOMAIN_POLY_PI,
    epsilon: float = 2.0,
    assembly_mode: str = "dense-serial",
    drop_tol: float = DROP_TOL_DEFAULT,
) -> DensityVector:
    """Compute the density at time T: choose the grid, assemble once, iterate."""
    grid = select_grid(h, T, rho=rho, r1=r1, domain_rule=domain_rule, epsilon=epsilon)
    return solve_on_grid(problem, grid, assembly_mode=assembly_mode, drop_tol=drop_tol)
