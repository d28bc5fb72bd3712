# mimo_dos/tests/conftest.py
import math

import numpy as np
import pytest

from mimo_dos.channel import LinkSnrConfig
from mimo_dos.distributions import RateDistribution

MC_DRAWS = 200_000


@pytest.fixture
def rng():
    """Seeded generator so every test is reproducible."""
    return np.random.default_rng(20240101)


@pytest.fixture
def exponential_dist():
    """Exponential mean-1 rate law tabulated analytically on [0, 40]."""
    grid = np.linspace(0.0, 40.0, 40001)
    return RateDistribution.from_cdf_pdf(grid, -np.expm1(-grid), np.exp(-grid), label='exponential')


@pytest.fixture
def point_mass_dist():
    """Narrow symmetric triangle around r0 = 2 (a smoothed point mass)."""
    grid = np.linspace(0.0, 4.0, 4001)
    width = 0.01
    pdf = np.maximum(width - np.abs(grid - 2.0), 0.0) / width ** 2
    return RateDistribution.from_pdf(grid, pdf, label='point-mass')


@pytest.fixture
def snr_10db():
    return LinkSnrConfig.from_db(10.0, 1.0)


@pytest.fixture
def snr_20db():
    return LinkSnrConfig.from_db(20.0, 1.0)


@pytest.fixture
def target_ps():
    return math.exp(-1.0)
