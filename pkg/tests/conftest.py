"""Pytest configuration and fixtures."""

import math

import pytest
from click.testing import CliRunner

from app.core.noise_models import NoiseFamily, NoiseModel


@pytest.fixture
def gaussian():
    """Unit-variance Gaussian noise."""
    return NoiseModel.gaussian(1.0)


@pytest.fixture
def laplace():
    """Unit-variance Laplace noise (b = 1/√2)."""
    return NoiseModel.laplace(math.sqrt(0.5))


@pytest.fixture
def cauchy():
    return NoiseModel.cauchy(1.0)


@pytest.fixture
def uniform():
    return NoiseModel.uniform(1.0)


@pytest.fixture
def finite_fisher_models(gaussian, laplace, cauchy):
    return [gaussian, laplace, cauchy]


@pytest.fixture
def noiseless():
    """Zero-scale Gaussian for exact-signal checks; bypasses validation on purpose."""
    return NoiseModel.model_construct(family=NoiseFamily.GAUSSIAN, scale=0.0)


@pytest.fixture
def runner():
    """Click runner with stderr kept apart from the document on stdout."""
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        # click >= 8.2 always separates the streams
        return CliRunner()
