import numpy as np
import pytest

from quditwitness import DensityMatrix
from quditwitness.linalg import ginibre


def random_density(rng: np.random.Generator, dim_a: int, dim_b: int) -> DensityMatrix:
    """Random full-rank mixed state (Ginibre construction)."""
    g = ginibre(dim_a * dim_b, rng)
    mat = g @ g.conj().T
    return DensityMatrix(dim_a, dim_b, mat / mat.trace())


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
