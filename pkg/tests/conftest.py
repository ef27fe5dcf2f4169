import numpy as np
import pytest

from eulerlab.dynamics import GasParameters
from eulerlab.spectral import make_grid, random_state


@pytest.fixture
def params():
    return GasParameters(gamma=1.4)


@pytest.fixture
def grid1():
    return make_grid(1, 32)


@pytest.fixture
def grid2():
    return make_grid(2, 16)


@pytest.fixture
def small_state(grid2, params):
    """Zero-mean random state with ||.||_3 = 1e-2."""
    return random_state(7, grid2, 3.0, 1e-2, theta=params.theta)


@pytest.fixture
def unit_mass_state(grid2, params):
    return random_state(11, grid2, 3.0, 1e-2, sigma_mean="unit_mass", theta=params.theta)

