import numpy as np
import pytest

from nlsblowup.grid import make_grid


@pytest.fixture
def grid1d():
    return make_grid(1, 8.0, 4096)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_field(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
