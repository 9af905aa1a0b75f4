"""Error norms and normalization diagnostics.

All comparisons are nodewise on a shared grid:

    l1    k * sum_j |a_j - b_j|          (discrete total-variation distance)
    linf  max_j |a_j - b_j|
    ks    max_j |F_a(x_j) - F_b(x_j)|    with F the on-grid CDF

The CDF uses the left-rectangle rule F_j = k * sum_(i <= j) values_i; both
sides of a comparison are built with the same rule, so the quadrature bias
cancels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch
from .grid import DensityVector, GridSpec
from .problems import SdeProblem, exact_density_on_grid


def _check_grids(a: DensityVector, b: DensityVector) -> None:
    if a.grid != b.grid:
        raise GridMismatch("densities live on different grids")


def l1_error(a: DensityVector, b: DensityVector) -> float:
    _check_grids(a, b)
    return a.grid.k * float(np.abs(a.values - b.values).sum())


def linf_error(a: DensityVector, b: DensityVector) -> float:
    _check_grids(a, b)
    return float(np.abs(a.values - b.values).max())


def cdf_on_grid(d: DensityVector) -> np.ndarray:
    """Running k-scaled cumulative sum; nondecreasing for nonnegative input."""
    return d.grid.k * np.cumsum(d.values)


def ks_error(a: DensityVector, b: DensityVector) -> float:
    _check_grids(a, b)
    return float(np.abs(cdf_on_grid(a) - cdf_on_grid(b)).max())


@dataclass
class ErrorReport:
    """Error norms of one computed density against the exact solution."""

    problem: str
    grid: GridSpec
    l1: float
    linf: float
    ks: float
    normalization_defect: float

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def k(self) -> float:
        return self.grid.k

    @property
    def M(self) -> int:
        return self.grid.M


def compare_to_exact(problem: SdeProblem, numeric: DensityVector, t: float) -> ErrorReport:
    """Sample the closed form on the numeric grid and record all three norms."""
    exact = exact_density_on_grid(problem, numeric.grid, t)
    return ErrorReport(
        problem=problem.name,
        grid=numeric.grid,
        l1=l1_error(numeric, exact),
        linf=linf_error(numeric, exact),
        ks=ks_error(numeric, exact),
        normalization_defect=numeric.normalization_defect,
    )
