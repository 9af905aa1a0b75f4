"""Exception and warning types shared across the package."""


class DtqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(DtqError, ValueError):
    """A solver parameter violates its documented precondition."""


class ZeroDiffusion(DtqError):
    """The diffusion coefficient vanishes (or underflows) where a Gaussian
    transition kernel needs it."""


class ZeroDiffusionAtNode(ZeroDiffusion):
    """Diffusion vanished at a specific grid node during assembly."""

    def __init__(self, node_index: int, x: float):
        self.node_index = node_index
        self.x = x
        super().__init__(
            f"diffusion coefficient is zero (or g^2*h underflows) at grid node "
            f"j={node_index} (x={x:.6g})"
        )


class GridMismatch(DtqError):
    """Two objects built on different grids were combined."""


class MissingExactDensity(DtqError):
    """The operation needs a closed-form density the problem does not carry."""


class SingularTridiagonal(DtqError):
    """Tridiagonal factorization or solve failed; the implicit matrix has
    lost diagonal dominance."""


class DegenerateFit(DtqError):
    """Slope fitting requires at least two distinct step sizes."""


class BandwidthOverflow(UserWarning):
    """No sub-diagonal satisfied the drop rule; the banded matrix was kept at
    full bandwidth."""


class HorizonRoundingWarning(UserWarning):
    """T/h was not an integer; the step count was rounded and the effective
    horizon is N*h."""


class GridCoverageWarning(UserWarning):
    """The initial point sits in the outer half of the grid; the domain rules
    assume mass concentrated near zero."""


class StepConstraintWarning(UserWarning):
    """h and k violate the step-size relation under which the one-step
    quadrature error bound holds; behavior is empirical only."""
