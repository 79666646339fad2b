import numpy as np
import pytest

from ftsmean import FunctionalSample, make_grid


@pytest.fixture(scope="session")
def grid100():
    return make_grid(100)


@pytest.fixture(scope="session")
def grid512():
    return make_grid(512)


def random_sample(grid, n, seed=0, scale=1.0):
    """Plain Gaussian random-walk curves; enough structure for invariance checks."""
    rng = np.random.default_rng(seed)
    steps = rng.standard_normal((n, grid.size)) * scale
    return FunctionalSample(grid, np.cumsum(steps, axis=1) / np.sqrt(grid.size))
