import numpy as np
import pytest

from tmcalc import quad


@pytest.fixture
def bump12():
    return quad.BumpSpec(1.0, 2.0)


@pytest.fixture
def bump12_gf(bump12):
    return bump12.to_grid_function()


@pytest.fixture
def bump_family():
    """A small battery of diverse bumps, supports bounded away from 0."""
    return [
        quad.BumpSpec.normalized(1.0, 2.0),
        quad.BumpSpec.normalized(0.5, 3.0),
        quad.BumpSpec.normalized(1.5, 1.8),
        quad.BumpSpec.normalized(0.8, 4.0),
        quad.BumpSpec.normalized(2.0, 2.3),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
