"""Shared fixtures."""

import numpy as np
import pytest

from src.models import SensorConfig, TargetParams
from src.physics import default_step


@pytest.fixture
def full_cfg():
    """1 mT sensor with every Hamiltonian term."""
    return SensorConfig.default(1.0)


@pytest.fixture
def secular_cfg():
    """1 mT sensor without the terms rotating near gamma_e B_z; fast to integrate."""
    return SensorConfig.default(1.0, secular=True)


@pytest.fixture
def secular_step(secular_cfg):
    return default_step(secular_cfg)


@pytest.fixture
def weak_target():
    return TargetParams.from_khz(1.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_dataset():
    """3 x 2 grid, two noisy repetitions, 11 instants in [0.5, 1] t0."""
    from src.acquisition import generate_dataset
    from src.models import AcquisitionPlan, GridSpec

    cfg = SensorConfig.default(1.0, secular=True)
    grid = GridSpec(omega_range=(1.0, 25.0), n_omega=3, xi_range=(-0.3, 0.3), n_xi=2)
    plan = AcquisitionPlan.in_t0(0.5, 1.0, n_points=11, n_shots=100, repetitions=2, seed=11)
    return generate_dataset(cfg, grid, plan, noiseless=False)
