import numpy as np
import pytest

from dtq import SdeProblem


def rel_l1(a: np.ndarray, b: np.ndarray) -> float:
    """Relative l1 difference with the second argument as reference."""
    return float(np.abs(a - b).sum() / np.abs(b).sum())


@pytest.fixture
def drift_free():
    """f = 0, g = 1: one Euler step is a standard Gaussian of variance h."""
    return SdeProblem(
        "drift-free",
        drift=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        diffusion=lambda x: np.ones_like(np.asarray(x, dtype=float)),
    )
