"""Space-time grids and densities sampled on them.

The spatial grid is always the symmetric lattice x_j = j*k for -M <= j <= M;
the temporal grid is t_n = n*h with N*h equal to the requested horizon.  The
half-width index M is chosen by one of three domain rules:

``poly-pi``
    M = ceil(pi / k^2), so the half-width y_M = M*k grows like h^(-3/4)
    for the default spatial step k = h^(3/4).
``poly-pi-half``
    M = ceil(pi/(2k) - 2), which keeps the grid strictly inside
    (-pi/2, pi/2).  Used for problems whose density lives on that interval.
``log``
    M = ceil((epsilon + rho + 1) * (-ln h) / k) for epsilon >= 1, so the
    half-width grows only logarithmically as h -> 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import HorizonRoundingWarning, InvalidParams

DOMAIN_POLY_PI = "poly-pi"
DOMAIN_POLY_PI_HALF = "poly-pi-half"
DOMAIN_LOG = "log"

DOMAIN_RULES = (DOMAIN_POLY_PI, DOMAIN_POLY_PI_HALF, DOMAIN_LOG)


@dataclass(frozen=True)
class GridSpec:
    """Equispaced space-time grid.

    Attributes
    ----------
    h : float
        Temporal step.
    k : float
        Spatial step.
    M : int
        Half-width index; the grid has 2M+1 nodes x_j = j*k, -M <= j <= M.
    N : int
        Number of temporal steps; the horizon is T = N*h.
    """

    h: float
    k: float
    M: int
    N: int

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise InvalidParams(f"temporal step h must be positive, got {self.h}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise InvalidParams(f"spatial step k must be positive, got {self.k}")
        if self.M < 0:
            raise InvalidParams(f"half-width index M must be >= 0, got {self.M}")
        if self.N < 1:
            raise InvalidParams(f"step count N must be >= 1, got {self.N}")

    @property
    def num_nodes(self) -> int:
        return 2 * self.M + 1

    @property
    def y_M(self) -> float:
        """Half-width of the spatial domain, M*k."""
        return self.M * self.k

    @property
    def horizon(self) -> float:
        return self.N * self.h

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1, dtype=float) * self.k


def select_grid(
    h: float,
    T: float,
    rho: float = 0.75,
    r1: float = 1.0,
    domain_rule: str = DOMAIN_POLY_PI,
    epsilon: float = 2.0,
) -> GridSpec:
    """Choose the grid for a solve to horizon ``T`` with temporal step ``h``.

    The spatial step is k = r1 * h**rho (rho > 1/2 so that the quadrature
    error decays as h -> 0), and M follows the requested domain rule.  The
    step count is N = round(T/h); if T/h is not an integer the effective
    horizon N*h differs from T and a warning is issued.
    """
    if not (h > 0 and math.isfinite(h)):
        raise InvalidParams(f"h must be positive, got {h}")
    if not (T > 0 and math.isfinite(T)):
        raise InvalidParams(f"T must be positive, got {T}")
    if h > T:
        raise InvalidParams(f"h must not exceed the horizon T ({h} > {T})")
    if rho <= 0.5:
        raise InvalidParams(f"rho must exceed 1/2, got {rho}")
    if r1 <= 0:
        raise InvalidParams(f"r1 must be positive, got {r1}")

    N = int(round(T / h))
    if N < 1:
        N = 1
    if abs(N * h - T) > 1e-9 * max(T, 1.0):
        warnings.warn(
            f"T/h = {T / h:.6g} is not an integer; using N = {N} steps "
            f"(effective horizon {N * h:.6g})",
            HorizonRoundingWarning,
            stacklevel=2,
        )

    k = r1 * h**rho

    if domain_rule == DOMAIN_POLY_PI:
        M = math.ceil(math.pi / k**2)
    elif domain_rule == DOMAIN_POLY_PI_HALF:
        M = math.ceil(math.pi / (2.0 * k) - 2.0)
    elif domain_rule == DOMAIN_LOG:
        if epsilon < 1.0:
            raise InvalidParams(f"logarithmic domain rule needs epsilon >= 1, got {epsilon}")
        if h >= 1.0:
            raise InvalidParams("logarithmic domain rule needs h < 1 so that -ln h > 0")
        M = math.ceil((epsilon + rho + 1.0) * (-math.log(h)) / k)
    else:
        raise InvalidParams(f"unknown domain rule {domain_rule!r}; expected one of {DOMAIN_RULES}")

    if M < 1:
        raise InvalidParams(
            f"domain rule {domain_rule!r} produced M = {M} < 1 at h = {h}; "
            "the spatial step is too coarse for this rule"
        )
    return GridSpec(h=h, k=k, M=M, N=N)


@dataclass
class DensityVector:
    """Density values on the nodes of a :class:`GridSpec` at one time level.

    ``time_index`` counts temporal levels: index 1 is the first level after
    the (analytically handled) point-mass initial condition, index N is the
    final horizon.
    """

    values: np.ndarray
    grid: GridSpec
    time_index: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.num_nodes,):
            raise InvalidParams(
                f"density has {self.values.shape} values but the grid has "
                f"{self.grid.num_nodes} nodes"
            )

    @property
    def mass(self) -> float:
        """k times the l1 sum of the values; 1 for a perfectly normalized density."""
        return self.grid.k * float(self.values.sum())

    @property
    def normalization_defect(self) -> float:
        return abs(self.mass - 1.0)

    def write_csv(self, path) -> None:
        """Write (node, density) rows with full 17-significant-digit formatting."""
        nodes = self.grid.nodes
        with open(path, "w", newline="") as fh:
            fh.write("node,density\n")
            for x, v in zip(nodes, self.values):
                fh.write(f"{x:.17g},{v:.17g}\n")
