"""Density tracking by quadrature for scalar SDEs.

Computes the probability density of dX = f(X) dt + g(X) dW by iterating the
Chapman-Kolmogorov equation of the Euler-discretized chain with trapezoidal
quadrature on a truncated grid, alongside a finite-difference Fokker-Planck
baseline, error metrics, and convergence/benchmark harnesses.
"""
from .errors import (
    BandwidthOverflow,
    DegenerateFit,
    DtqError,
    GridCoverageWarning,
    GridMismatch,
    HorizonRoundingWarning,
    InvalidParams,
    MissingExactDensity,
    SingularTridiagonal,
    StepConstraintWarning,
    ZeroDiffusion,
    ZeroDiffusionAtNode,
)
from .fp import FpWorkspace, TridiagonalLU, forcing_vector, fp_solve, heat_kernel_u
from .grid import (
    DOMAIN_LOG,
    DOMAIN_POLY_PI,
    DOMAIN_POLY_PI_HALF,
    DensityVector,
    GridSpec,
    select_grid,
)
from .harness import (
    ALL_METHODS,
    DEFAULT_H_LADDER,
    EXTENDED_H_LADDER,
    ConvergenceTable,
    RunRecord,
    fit_slope,
    run_benchmark,
    run_convergence,
    solve_once,
    solve_with_method,
    write_benchmark_csv,
    write_convergence_csv,
)
from .kernel import (
    DROP_TOL_DEFAULT,
    KernelMatrix,
    assemble,
    assemble_banded,
    assemble_dense,
    evolve,
    gaussian_kernel,
    initial_density,
    solve_on_grid,
    step,
)
from .metrics import (
    ErrorReport,
    cdf_on_grid,
    compare_to_exact,
    ks_error,
    l1_error,
    linf_error,
)
from .problems import (
    AdmissibleFlags,
    SdeProblem,
    builtin_problems,
    exact_density_on_grid,
    get_problem,
    normalization_check,
    problem_names,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleFlags",
    "ALL_METHODS",
    "BandwidthOverflow",
    "ConvergenceTable",
    "DEFAULT_H_LADDER",
    "DegenerateFit",
    "DensityVector",
    "DOMAIN_LOG",
    "DOMAIN_POLY_PI",
    "DOMAIN_POLY_PI_HALF",
    "DROP_TOL_DEFAULT",
    "DtqError",
    "ErrorReport",
    "EXTENDED_H_LADDER",
    "FpWorkspace",
    "GridCoverageWarning",
    "GridMismatch",
    "GridSpec",
    "HorizonRoundingWarning",
    "InvalidParams",
    "KernelMatrix",
    "MissingExactDensity",
    "RunRecord",
    "SdeProblem",
    "SingularTridiagonal",
    "StepConstraintWarning",
    "TridiagonalLU",
    "ZeroDiffusion",
    "ZeroDiffusionAtNode",
    "assemble",
    "assemble_banded",
    "assemble_dense",
    "builtin_problems",
    "cdf_on_grid",
    "compare_to_exact",
    "evolve",
    "exact_density_on_grid",
    "fit_slope",
    "forcing_vector",
    "fp_solve",
    "gaussian_kernel",
    "get_problem",
    "heat_kernel_u",
    "initial_density",
    "ks_error",
    "l1_error",
    "linf_error",
    "normalization_check",
    "problem_names",
    "run_benchmark",
    "run_convergence",
    "select_grid",
    "solve_on_grid",
    "solve_once",
    "solve_with_method",
    "step",
    "write_benchmark_csv",
    "write_convergence_csv",
]
