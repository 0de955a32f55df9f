"""Shot-noise sampling of a noiseless response."""

from __future__ import annotations

import numpy as np

from ..errors import PhysicsInputError
from ..models.acquisition import ShotRecord
from ..models.sensor import ResponseTrace


def sample_probabilities(p: np.ndarray, n_shots: int, rng: np.random.Generator) -> np.ndarray:
    """Mean of n_shots Bernoulli(p) draws at each point, as Binomial(n_shots, p) / n_shots.

    Works on any array shape; p is clipped to [0, 1] first.
    """
    if n_shots < 1:
        raise PhysicsInputError("n_shots must be >= 1")
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return rng.binomial(n_shots, p) / n_shots


def sample_shots(trace: ResponseTrace, n_shots: int, rng: np.random.Generator) -> ShotRecord:
    """Simulate N_m projective measurements at each instant of the trace."""
    return ShotRecord(
        times=trace.times,
        p=sample_probabilities(trace.p_d, n_shots, rng),
        n_shots=n_shots,
    )


def noiseless_record(trace: ResponseTrace) -> ShotRecord:
    return ShotRecord(times=trace.times, p=trace.p_d.copy(), n_shots=None)
