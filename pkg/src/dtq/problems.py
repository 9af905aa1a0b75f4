"""Scalar SDE test problems dX = f(X) dt + g(X) dW with known densities.

Six benchmark equations ship with the package, all started from the
deterministic initial point X_0 = 0 and each carrying a closed-form density
p(x, t) for t > 0:

``ex1``  f = -x,                         g = 1           (Ornstein-Uhlenbeck)
``ex2``  f = -tanh(x) sech^2(x) / 2,     g = sech(x)
``ex3``  f = -sin(x) cos^3(x),           g = cos^2(x)    (support (-pi/2, pi/2))
``ex4``  f = x/2 + sqrt(1+x^2),          g = sqrt(1+x^2)
``ex5``  f = x/2,                        g = sqrt(1+x^2)
``ex6``  f = -sqrt(1+x^2) asinh(x) + x/2, g = sqrt(1+x^2)

ex2..ex6 arise from invertible transformations of Gaussian processes
(Y = sinh(x), tan(x), asinh(x)), which is where the closed forms come from.
The admissibility flags record which global coefficient hypotheses
(Lipschitz drift, diffusion bounded below/above) each problem satisfies;
they are documentation only and never alter the numerics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import MissingExactDensity
from .grid import DensityVector, GridSpec


@dataclass(frozen=True)
class AdmissibleFlags:
    """Which coefficient hypotheses hold globally (metadata only)."""

    drift_lipschitz: bool = True
    diffusion_bounded_below: bool = True
    diffusion_bounded_above: bool = True


@dataclass(frozen=True)
class SdeProblem:
    """A scalar SDE dX = f(X) dt + g(X) dW with deterministic X_0.

    ``drift`` and ``diffusion`` must accept numpy arrays as well as scalars.
    ``exact_density``, when present, is p(x, t) for t > 0 and is zero on and
    beyond the boundary of ``support`` (an open interval; ``None`` means the
    whole real line).
    """

    name: str
    drift: Callable
    diffusion: Callable
    initial_point: float = 0.0
    exact_density: Optional[Callable] = None
    support: Optional[tuple[float, float]] = None
    admissible_flags: AdmissibleFlags = field(default_factory=AdmissibleFlags)

    def has_exact_density(self) -> bool:
        return self.exact_density is not None


def _ones_like(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _sech(x):
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(x)


def _log_cosh(x):
    # |x| + log1p(e^(-2|x|)) - log 2, stable for large |x| where cosh overflows
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def _p_ex1(x, t):
    s = 1.0 - np.exp(-2.0 * t)
    return np.exp(-np.asarray(x, dtype=float) ** 2 / s) / np.sqrt(math.pi * s)


def _p_ex2(x, t):
    # cosh(x) * exp(-sinh(x)^2/(2t)) / sqrt(2 pi t), evaluated in log space so
    # the overflow of sinh^2 gives a clean 0 instead of inf*0
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        expo = _log_cosh(x) - np.sinh(x) ** 2 / (2.0 * t)
    return np.exp(expo) / np.sqrt(2.0 * math.pi * t)


def _p_ex3(x, t):
    x = np.asarray(x, dtype=float)
    c = np.cos(x)
    return np.exp(-np.tan(x) ** 2 / (2.0 * t)) / (c * c * np.sqrt(2.0 * math.pi * t))


def _p_ex4(x, t):
    x = np.asarray(x, dtype=float)
    return np.exp(-((np.arcsinh(x) - t) ** 2) / (2.0 * t)) / np.sqrt(
        2.0 * math.pi * t * (1.0 + x * x)
    )


def _p_ex5(x, t):
    x = np.asarray(x, dtype=float)
    return np.exp(-np.arcsinh(x) ** 2 / (2.0 * t)) / np.sqrt(2.0 * math.pi * t * (1.0 + x * x))


def _p_ex6(x, t):
    x = np.asarray(x, dtype=float)
    s = 1.0 - np.exp(-2.0 * t)
    return np.exp(-np.arcsinh(x) ** 2 / s) / np.sqrt(math.pi * s * (1.0 + x * x))


_EX1 = SdeProblem(
    name="ex1",
    drift=lambda x: -np.asarray(x, dtype=float),
    diffusion=_ones_like,
    exact_density=_p_ex1,
    admissible_flags=AdmissibleFlags(True, True, True),
)

_EX2 = SdeProblem(
    name="ex2",
    drift=lambda x: -0.5 * np.tanh(x) * _sech(x) ** 2,
    diffusion=_sech,
    exact_density=_p_ex2,
    admissible_flags=AdmissibleFlags(True, False, True),
)

_EX3 = SdeProblem(
    name="ex3",
    drift=lambda x: -np.sin(x) * np.cos(x) ** 3,
    diffusion=lambda x: np.cos(x) ** 2,
    exact_density=_p_ex3,
    support=(-math.pi / 2.0, math.pi / 2.0),
    admissible_flags=AdmissibleFlags(True, False, True),
)

_EX4 = SdeProblem(
    name="ex4",
    drift=lambda x: 0.5 * np.asarray(x, dtype=float) + np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2),
    diffusion=lambda x: np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2),
    exact_density=_p_ex4,
    admissible_flags=AdmissibleFlags(True, True, False),
)

_EX5 = SdeProblem(
    name="ex5",
    drift=lambda x: 0.5 * np.asarray(x, dtype=float),
    diffusion=lambda x: np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2),
    exact_density=_p_ex5,
    admissible_flags=AdmissibleFlags(True, True, False),
)

_EX6 = SdeProblem(
    name="ex6",
    drift=lambda x: -np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2) * np.arcsinh(x)
    + 0.5 * np.asarray(x, dtype=float),
    diffusion=lambda x: np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2),
    exact_density=_p_ex6,
    admissible_flags=AdmissibleFlags(False, True, False),
)

_BUILTINS: dict[str, SdeProblem] = {p.name: p for p in (_EX1, _EX2, _EX3, _EX4, _EX5, _EX6)}


def builtin_problems() -> list[SdeProblem]:
    """The six benchmark problems, in order ex1..ex6."""
    return list(_BUILTINS.values())


def problem_names() -> list[str]:
    return list(_BUILTINS)


def get_problem(name: str) -> SdeProblem:
    """Look up a builtin problem by name; raises KeyError for unknown names."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise KeyError(
            f"unknown problem {name!r}; valid names: {', '.join(_BUILTINS)}"
        ) from None


def exact_density_on_grid(problem: SdeProblem, grid: GridSpec, t: float) -> DensityVector:
    """Sample the problem's closed-form density on the grid nodes at time t.

    Nodes on or beyond the boundary of the declared support get exactly 0.
    """
    if problem.exact_density is None:
        raise MissingExactDensity(f"problem {problem.name!r} has no closed-form density")
    if not t > 0:
        raise MissingExactDensity(f"exact densities are defined for t > 0, got t = {t}")
    x = grid.nodes
    values = np.zeros(grid.num_nodes)
    if problem.support is None:
        values[:] = problem.exact_density(x, t)
    else:
        lo, hi = problem.support
        inside = (x > lo) & (x < hi)
        values[inside] = problem.exact_density(x[inside], t)
    return DensityVector(values, grid, time_index=int(round(t / grid.h)))


def normalization_check(problem: SdeProblem, t: float = 1.0) -> float:
    """Trapezoidal integral of the exact density at time t over a fine grid.

    Bounded supports are integrated over (lo + 1e-4, hi - 1e-4) at spacing
    1e-5.  Unbounded supports use a fine core [-30, 30] at spacing 1e-3 plus
    coarse wings out to +-3e4: the sinh-transformed densities have lognormal
    tails that still carry ~1e-3 of mass beyond |x| = 30.  Returns the
    integral; for a correctly normalized density it is 1 to ~1e-6.
    """
    if problem.exact_density is None:
        raise MissingExactDensity(f"problem {problem.name!r} has no closed-form density")
    if problem.support is None:
        x = np.concatenate(
            [
                np.arange(-3.0e4, -30.0, 0.1),
                np.arange(-30.0, 30.0, 1e-3),
                np.arange(30.0, 3.0e4 + 0.1, 0.1),
            ]
        )
    else:
        lo, hi = problem.support
        x = np.arange(lo + 1e-4, hi - 1e-4, 1e-5)
    return float(np.trapezoid(problem.exact_density(x, t), x))
