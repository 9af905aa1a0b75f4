"""Convergence studies, timing benchmarks, and CSV persistence.

A "method" here is one of the three kernel-assembly variants of the
quadrature solver or the finite-difference baseline:

    dtq-naive     dense kernel matrix, serial assembly
    dtq-parallel  dense kernel matrix, threaded row assembly
    dtq-sparse    banded kernel matrix with the drop rule
    fp            Fokker-Planck finite differences (delta subtraction)

Benchmarks time the solve only (grid selection, exact-solution evaluation,
and file output are excluded) on a monotonic clock, repeat it, and report
the mean.  The solves are deterministic, so the recorded errors do not
depend on the repetition count.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateFit, InvalidParams, MissingExactDensity
from .fp import fp_solve
from .grid import DOMAIN_LOG, DOMAIN_POLY_PI, DOMAIN_POLY_PI_HALF, DensityVector, GridSpec, select_grid
from .kernel import DROP_TOL_DEFAULT, solve_on_grid
from .metrics import ErrorReport, compare_to_exact
from .problems import SdeProblem

DEFAULT_H_LADDER = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01)
EXTENDED_H_LADDER = (0.005, 0.002, 0.001)

DTQ_ASSEMBLY = {
    "dtq-naive": "dense-serial",
    "dtq-parallel": "dense-parallel",
    "dtq-sparse": "banded",
}
ALL_METHODS = ("dtq-naive", "dtq-parallel", "dtq-sparse", "fp")

CONVERGENCE_HEADER = "problem,h,k,M,l1,linf,ks,norm_defect"
BENCHMARK_HEADER = CONVERGENCE_HEADER + ",method,wall_seconds,reps"


def default_domain_rule(problem: SdeProblem) -> str:
    """Problems with a bounded support get the grid that stays inside it."""
    return DOMAIN_POLY_PI_HALF if problem.support is not None else DOMAIN_POLY_PI


def _resolve_rule(problem: SdeProblem, domain_rule: Optional[str]) -> str:
    return default_domain_rule(problem) if domain_rule is None else domain_rule


def solve_with_method(
    problem: SdeProblem,
    grid: GridSpec,
    method: str,
    kappa: float = 1.0,
    drop_tol: float = DROP_TOL_DEFAULT,
) -> DensityVector:
    """Run one solver on an already-chosen grid."""
    if method in DTQ_ASSEMBLY:
        return solve_on_grid(problem, grid, assembly_mode=DTQ_ASSEMBLY[method], drop_tol=drop_tol)
    if method == "fp":
        return fp_solve(problem, grid.horizon, grid, kappa=kappa)
    raise InvalidParams(f"unknown method {method!r}; expected one of {ALL_METHODS}")


def fit_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ln(error) against ln(h)."""
    if len(points) < 2:
        raise InvalidParams(f"slope fitting needs at least 2 points, got {len(points)}")
    h = np.array([p[0] for p in points], dtype=float)
    e = np.array([p[1] for p in points], dtype=float)
    if not ((h > 0).all() and (e > 0).all()):
        raise InvalidParams("slope fitting needs positive step sizes and errors")
    if np.all(h == h[0]):
        raise DegenerateFit("all step sizes are equal; the slope is undefined")
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


@dataclass
class ConvergenceTable:
    """Per-h error reports for one problem plus fitted log-log slopes.

    ``slopes`` maps norm name -> fitted slope; it is None when fewer than
    two ladder points are available.
    """

    problem: str
    rows: list[ErrorReport]
    slopes: Optional[dict[str, float]]


@dataclass
class RunRecord(ErrorReport):
    """ErrorReport plus timing for one (h, method) benchmark cell."""

    method: str = ""
    wall_seconds: float = 0.0
    repetitions: int = 1


def _validated_ladder(h_list: Optional[Sequence[float]]) -> list[float]:
    ladder = list(DEFAULT_H_LADDER) if h_list is None else [float(h) for h in h_list]
    if not ladder:
        raise InvalidParams("the h ladder is empty")
    if any(h <= 0 for h in ladder):
        raise InvalidParams("all ladder steps must be positive")
    ladder = sorted(set(ladder), reverse=True)
    return ladder


def run_convergence(
    problem: SdeProblem,
    h_list: Optional[Sequence[float]] = None,
    T: float = 1.0,
    rho: float = 0.75,
    r1: float = 1.0,
    domain_rule: Optional[str] = None,
    epsilon: float = 2.0,
    method: str = "dtq-naive",
    kappa: float = 1.0,
    drop_tol: float = DROP_TOL_DEFAULT,
) -> ConvergenceTable:
    """Solve over a ladder of temporal steps and compare with the closed form.

    ``domain_rule=None`` picks the rule from the problem's support (the
    bounded-support grid for ex3, the polynomial rule otherwise).
    """
    if not problem.has_exact_density():
        raise MissingExactDensity(
            f"problem {problem.name!r} has no closed-form density to converge against"
        )
    rule = _resolve_rule(problem, domain_rule)
    rows = []
    for h in _validated_ladder(h_list):
        grid = select_grid(h, T, rho=rho, r1=r1, domain_rule=rule, epsilon=epsilon)
        sol = solve_with_method(problem, grid, method, kappa=kappa, drop_tol=drop_tol)
        rows.append(compare_to_exact(problem, sol, grid.horizon))

    slopes = None
    if len(rows) >= 2 and all(r.l1 > 0 and r.linf > 0 and r.ks > 0 for r in rows):
        slopes = {
            "l1": fit_slope([(r.h, r.l1) for r in rows]),
            "linf": fit_slope([(r.h, r.linf) for r in rows]),
            "ks": fit_slope([(r.h, r.ks) for r in rows]),
        }
    return ConvergenceTable(problem=problem.name, rows=rows, slopes=slopes)


def run_benchmark(
    problem: SdeProblem,
    h_list: Optional[Sequence[float]] = None,
    methods: Sequence[str] = ALL_METHODS,
    T: float = 1.0,
    rho: float = 0.75,
    r1: float = 1.0,
    domain_rule: Optional[str] = None,
    epsilon: float = 2.0,
    repetitions: int = 5,
    kappa: float = 1.0,
    drop_tol: float = DROP_TOL_DEFAULT,
) -> list[RunRecord]:
    """Time every (h, method) cell on a shared grid and record error + time."""
    if repetitions < 1:
        raise InvalidParams(f"repetitions must be >= 1, got {repetitions}")
    if not problem.has_exact_density():
        raise MissingExactDensity(
            f"problem {problem.name!r} has no closed-form density; the error axis needs one"
        )
    for m in methods:
        if m not in ALL_METHODS:
            raise InvalidParams(f"unknown method {m!r}; expected one of {ALL_METHODS}")
    rule = _resolve_rule(problem, domain_rule)

    records = []
    for h in _validated_ladder(h_list):
        grid = select_grid(h, T, rho=rho, r1=r1, domain_rule=rule, epsilon=epsilon)
        for method in methods:
            times = []
            sol = None
            for _ in range(repetitions):
                t0 = time.perf_counter()
                sol = solve_with_method(problem, grid, method, kappa=kappa, drop_tol=drop_tol)
                times.append(time.perf_counter() - t0)
            report = compare_to_exact(problem, sol, grid.horizon)
            records.append(
                RunRecord(
                    problem=report.problem,
                    grid=report.grid,
                    l1=report.l1,
                    linf=report.linf,
                    ks=report.ks,
                    normalization_defect=report.normalization_defect,
                    method=method,
                    wall_seconds=float(np.mean(times)),
                    repetitions=repetitions,
                )
            )
    return records


def solve_once(
    problem: SdeProblem,
    method: str,
    h: float,
    output_path,
    T: float = 1.0,
    rho: float = 0.75,
    r1: float = 1.0,
    domain_rule: Optional[str] = None,
    epsilon: float = 2.0,
    kappa: float = 1.0,
    drop_tol: float = DROP_TOL_DEFAULT,
) -> DensityVector:
    """One solve, persisted as a (node, density) CSV."""
    rule = _resolve_rule(problem, domain_rule)
    grid = select_grid(h, T, rho=rho, r1=r1, domain_rule=rule, epsilon=epsilon)
    sol = solve_with_method(problem, grid, method, kappa=kappa, drop_tol=drop_tol)
    sol.write_csv(output_path)
    return sol


def _report_fields(r: ErrorReport) -> str:
    return (
        f"{r.problem},{r.h:.17g},{r.k:.17g},{r.M},"
        f"{r.l1:.17g},{r.linf:.17g},{r.ks:.17g},{r.normalization_defect:.17g}"
    )


def write_convergence_csv(table: ConvergenceTable, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CONVERGENCE_HEADER + "\n")
        for r in table.rows:
            fh.write(_report_fields(r) + "\n")


def write_benchmark_csv(records: Sequence[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(BENCHMARK_HEADER + "\n")
        for r in records:
            fh.write(
                f"{_report_fields(r)},{r.method},{r.wall_seconds:.17g},{r.repetitions}\n"
            )
