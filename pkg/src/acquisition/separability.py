"""Whether two detunings can be told apart from shot-noise-limited data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..models.sensor import SensorConfig, TargetParams
from ..physics.forward import simulate_traces


def shot_level(n_shots: int) -> float:
    """2 sigma of a single P_i at p = 1/2: 2 sqrt(0.25 / N_m)."""
    return 2.0 * math.sqrt(0.25 / n_shots)


@dataclass(frozen=True)
class SeparabilityResult:
    window: tuple[float, float]
    max_separation: float
    threshold: float

    @property
    def separable(self) -> bool:
        return self.max_separation > self.threshold


def max_separation(
    cfg: SensorConfig,
    first: TargetParams,
    second: TargetParams,
    window: tuple[float, float],
    n_points: int = 101,
    n_shots: int = 100,
    step: float | None = None,
) -> SeparabilityResult:
    """max_t |P_D(first) - P_D(second)| over n_points instants of the window."""
    times = np.linspace(window[0], window[1], n_points)
    traces = simulate_traces(cfg, [first, second], times, step)
    return SeparabilityResult(
        window=window,
        max_separation=float(np.max(np.abs(traces[0] - traces[1]))),
        threshold=shot_level(n_shots),
    )
