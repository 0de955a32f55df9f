"""Acquisition records: plans, grids, shot records and datasets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from ..errors import PhysicsInputError
from ..units import T0, khz_to_rad
from .sensor import SensorConfig, TargetParams


class Split(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


SPLIT_FRACTIONS = {Split.TRAIN: 0.70, Split.VALIDATION: 0.15, Split.TEST: 0.15}


@dataclass(frozen=True)
class AcquisitionPlan:
    """When and how often the sensor is read out."""

    window: tuple[float, float] = (0.5 * T0, T0)
    n_points: int = 101
    n_shots: int = 100
    repetitions: int = 1
    seed: int = 0

    def __post_init__(self):
        t_a, t_b = self.window
        if not (0 <= t_a < t_b) or not math.isfinite(t_b):
            raise PhysicsInputError(f"window must satisfy 0 <= t_a < t_b, got {self.window}")
        if self.n_points < 2:
            raise PhysicsInputError("n_points must be >= 2")
        if self.n_shots < 1:
            raise PhysicsInputError("n_shots must be >= 1")
        if self.repetitions < 1:
            raise PhysicsInputError("repetitions must be >= 1")

    @classmethod
    def in_t0(cls, start: float, end: float, **kwargs) -> AcquisitionPlan:
        """Plan whose window is given in multiples of t0 = 1.41 ms."""
        return cls(window=(start * T0, end * T0), **kwargs)

    def times(self) -> np.ndarray:
        """N_p equally spaced instants, both window ends included."""
        return np.linspace(self.window[0], self.window[1], self.n_points)


@dataclass(frozen=True)
class GridSpec:
    """Equally spaced (Omega_tg, xi) grid in ordinary kHz."""

    omega_range: tuple[float, float] = (1.0, 25.0)
    n_omega: int = 241
    xi_range: tuple[float, float] = (-0.3, 0.3)
    n_xi: int = 51

    def omega_values_khz(self) -> np.ndarray:
        return np.linspace(self.omega_range[0], self.omega_range[1], self.n_omega)

    def xi_values_khz(self) -> np.ndarray:
        return np.linspace(self.xi_range[0], self.xi_range[1], self.n_xi)


@dataclass(frozen=True)
class RescaleRanges:
    """Affine [0, 1] map for the targets, in rad/s."""

    omega_min: float
    omega_max: float
    xi_min: float
    xi_max: float

    def __post_init__(self):
        if not (self.omega_max > self.omega_min and self.xi_max > self.xi_min):
            raise PhysicsInputError("rescale ranges must be nondegenerate")

    @classmethod
    def global_ranges(cls) -> RescaleRanges:
        """Omega/2pi in [1, 25] kHz and xi/2pi in [-0.3, 0.3] kHz."""
        return cls(
            omega_min=float(khz_to_rad(1.0)),
            omega_max=float(khz_to_rad(25.0)),
            xi_min=float(khz_to_rad(-0.3)),
            xi_max=float(khz_to_rad(0.3)),
        )

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.omega_min, self.xi_min])

    @property
    def span(self) -> np.ndarray:
        return np.array([self.omega_max - self.omega_min, self.xi_max - self.xi_min])


@dataclass(frozen=True)
class ShotRecord:
    """Measured probabilities P_i = (1/N_m) sum_n z_{n;i}."""

    times: np.ndarray
    p: np.ndarray
    n_shots: Optional[int]  # None for a noiseless record

    @property
    def sigma(self) -> float:
        """Per-point standard deviation used by the Gaussian likelihood."""
        if self.n_shots is None:
            return 0.0
        return 1.0 / math.sqrt(self.n_shots)


@dataclass(frozen=True)
class Example:
    """One network input row with its targets."""

    inputs: np.ndarray
    targets: TargetParams
    rescaled: np.ndarray
    repetition: int
    split: Split


@dataclass
class Dataset:
    """Rows of simulated acquisitions plus everything needed to regenerate them."""

    inputs: np.ndarray  # (N, N_p)
    targets: np.ndarray  # (N, 2) rad/s
    repetitions: np.ndarray  # (N,)
    grid_index: np.ndarray  # (N,)
    splits: np.ndarray  # (N,) of Split values
    grid: GridSpec
    ranges: RescaleRanges
    plan: AcquisitionPlan
    noiseless: bool
    split_by_target: bool = False
    omega_min_khz: Optional[float] = None
    sensor: Optional[SensorConfig] = None
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    def __iter__(self) -> Iterator[Example]:
        return (self.example(i) for i in range(len(self)))

    @property
    def rescaled_targets(self) -> np.ndarray:
        return (self.targets - self.ranges.lower) / self.ranges.span

    def example(self, i: int) -> Example:
        return Example(
            inputs=self.inputs[i],
            targets=TargetParams(float(self.targets[i, 0]), float(self.targets[i, 1])),
            rescaled=self.rescaled_targets[i],
            repetition=int(self.repetitions[i]),
            split=Split(self.splits[i]),
        )

    def mask(self, split: Split) -> np.ndarray:
        return self.splits == split.value

    def split(self, split: Split) -> tuple[np.ndarray, np.ndarray]:
        """(inputs, rescaled targets) of one split."""
        m = self.mask(split)
        return self.inputs[m], self.rescaled_targets[m]

    def counts(self) -> dict[Split, int]:
        return {s: int(np.count_nonzero(self.mask(s))) for s in Split}
