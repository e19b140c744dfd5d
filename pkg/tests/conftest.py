"""Shared fixtures for the fgqc test suite."""

import numpy as np
import pytest

from fgqc.propagate import IntegratorConfig


@pytest.fixture(scope="session")
def cfg() -> IntegratorConfig:
    """Default integrator configuration used across the suite."""
    return IntegratorConfig(dt=2e-4)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
