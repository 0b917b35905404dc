"""Shared pytest configuration."""

import numpy as np
import pytest

from src.core.sample import CovariateMatrix


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running Monte Carlo or timing test")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_covariates(rng):
    """60 units in 3 dimensions."""
    return CovariateMatrix(rng.standard_normal((60, 3)))
