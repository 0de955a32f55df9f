"""Sensor-side domain records: constants, unknowns, states and traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Literal

import numpy as np

from ..errors import PhysicsInputError
from ..units import TWO_PI, khz_to_rad, mt_to_tesla, per_gauss_to_per_tesla

UdCoupling = Literal["target", "printed"]


class Level(IntEnum):
    """Dressed-basis ordering used by every 4-vector and 4x4 matrix."""

    UP = 0  # |u>
    DOWN = 1  # |d>
    DARK = 2  # |D>
    PRIME = 3  # |0'>


@dataclass(frozen=True)
class SensorConfig:
    """Physical constants of the dressed 171Yb+ sensor, all angular (rad/s, T)."""

    drive_amplitude: float
    static_field: float
    gyro_e: float
    gyro_n: float
    hyperfine_a: float
    ud_coupling: UdCoupling = "target"
    secular: bool = False

    def __post_init__(self):
        for name in ("drive_amplitude", "static_field", "gyro_e", "gyro_n", "hyperfine_a"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise PhysicsInputError(f"{name} must be strictly positive, got {value!r}")
        if self.ud_coupling not in ("target", "printed"):
            raise PhysicsInputError(
                f"ud_coupling must be 'target' or 'printed': {self.ud_coupling}"
            )

    @classmethod
    def default(
        cls,
        b_field_mt: float = 1.0,
        *,
        drive_khz: float = 37.27,
        gyro_e_mhz_per_g: float = 2.8024,
        gyro_n_khz_per_g: float = 4.7248,
        hyperfine_ghz: float = 12.643,
        ud_coupling: UdCoupling = "target",
        secular: bool = False,
    ) -> SensorConfig:
        """Build a config from the laboratory units the source quotes."""
        return cls(
            drive_amplitude=float(khz_to_rad(drive_khz)),
            static_field=float(mt_to_tesla(b_field_mt)),
            gyro_e=float(per_gauss_to_per_tesla(TWO_PI * gyro_e_mhz_per_g * 1.0e6)),
            gyro_n=float(per_gauss_to_per_tesla(TWO_PI * gyro_n_khz_per_g * 1.0e3)),
            hyperfine_a=TWO_PI * hyperfine_ghz * 1.0e9,
            ud_coupling=ud_coupling,
            secular=secular,
        )

    @property
    def larmor(self) -> float:
        """gamma_e * B_z, the fastest explicit phase rate."""
        return self.gyro_e * self.static_field

    @property
    def hyperfine_shift(self) -> float:
        """gamma_e^2 B_z^2 / 2A, rate of the slow second-order phase."""
        return self.larmor**2 / (2.0 * self.hyperfine_a)


@dataclass(frozen=True)
class TargetParams:
    """Unknowns of the target field: Rabi amplitude and detuning (rad/s)."""

    rabi: float
    detuning: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rabi) and math.isfinite(self.detuning)):
            raise PhysicsInputError("target parameters must be finite")
        if self.rabi < 0:
            raise PhysicsInputError(f"rabi amplitude must be >= 0, got {self.rabi}")

    @classmethod
    def from_khz(cls, rabi_khz: float, detuning_khz: float = 0.0) -> TargetParams:
        return cls(rabi=float(khz_to_rad(rabi_khz)), detuning=float(khz_to_rad(detuning_khz)))


@dataclass(frozen=True)
class QuantumState:
    """Four dressed-basis amplitudes at a given time."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise PhysicsInputError(f"state needs 4 amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def dark(cls, time: float = 0.0) -> QuantumState:
        amps = np.zeros(4, dtype=complex)
        amps[Level.DARK] = 1.0
        return cls(amps, time)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def population(self, level: Level) -> float:
        return float(abs(self.amplitudes[level]) ** 2)


@dataclass(frozen=True)
class ResponseTrace:
    """Survival probability of |D> sampled on a strictly increasing time grid."""

    times: np.ndarray
    p_d: np.ndarray
    norms: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        p_d = np.asarray(self.p_d, dtype=float)
        if times.shape != p_d.shape or times.ndim != 1:
            raise PhysicsInputError("times and p_d must be 1-D arrays of equal length")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise PhysicsInputError("trace times must be strictly increasing")
        if np.any((p_d < 0) | (p_d > 1)):
            raise PhysicsInputError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "p_d", p_d)

    def __len__(self) -> int:
        return self.times.size
