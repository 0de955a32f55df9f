"""On-disk structures for dataset metadata and model files.

These are msgspec Structs so files are decoded with type validation and
unknown fields are rejected. Frequencies are stored in kHz, times in seconds.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Optional

import msgspec

from ..units import khz_to_rad, rad_to_khz
from .acquisition import AcquisitionPlan, GridSpec, RescaleRanges
from .sensor import SensorConfig

FORMAT_VERSION = 1

# Network inputs are the measured probabilities themselves.
INPUT_SCALING = "identity"


class SensorSpec(msgspec.Struct, forbid_unknown_fields=True):
    """SensorConfig in SI angular units."""

    drive_amplitude: float
    static_field: float
    gyro_e: float
    gyro_n: float
    hyperfine_a: float
    ud_coupling: str = "target"
    secular: bool = False

    @classmethod
    def from_config(cls, cfg: SensorConfig) -> SensorSpec:
        return cls(**asdict(cfg))

    def to_config(self) -> SensorConfig:
        return SensorConfig(**msgspec.structs.asdict(self))


class GridRecord(msgspec.Struct, forbid_unknown_fields=True):
    omega_range_khz: tuple[float, float]
    n_omega: int
    xi_range_khz: tuple[float, float]
    n_xi: int

    @classmethod
    def from_spec(cls, grid: GridSpec) -> GridRecord:
        return cls(grid.omega_range, grid.n_omega, grid.xi_range, grid.n_xi)

    def to_spec(self) -> GridSpec:
        return GridSpec(self.omega_range_khz, self.n_omega, self.xi_range_khz, self.n_xi)


class PlanRecord(msgspec.Struct, forbid_unknown_fields=True):
    window_s: tuple[float, float]
    n_points: int
    n_shots: int
    repetitions: int
    seed: int

    @classmethod
    def from_plan(cls, plan: AcquisitionPlan) -> PlanRecord:
        return cls(plan.window, plan.n_points, plan.n_shots, plan.repetitions, plan.seed)

    def to_plan(self) -> AcquisitionPlan:
        return AcquisitionPlan(
            window=self.window_s,
            n_points=self.n_points,
            n_shots=self.n_shots,
            repetitions=self.repetitions,
            seed=self.seed,
        )


class RangesRecord(msgspec.Struct, forbid_unknown_fields=True):
    omega_min_khz: float
    omega_max_khz: float
    xi_min_khz: float
    xi_max_khz: float

    @classmethod
    def from_ranges(cls, ranges: RescaleRanges) -> RangesRecord:
        return cls(
            float(rad_to_khz(ranges.omega_min)),
            float(rad_to_khz(ranges.omega_max)),
            float(rad_to_khz(ranges.xi_min)),
            float(rad_to_khz(ranges.xi_max)),
        )

    def to_ranges(self) -> RescaleRanges:
        return RescaleRanges(
            omega_min=float(khz_to_rad(self.omega_min_khz)),
            omega_max=float(khz_to_rad(self.omega_max_khz)),
            xi_min=float(khz_to_rad(self.xi_min_khz)),
            xi_max=float(khz_to_rad(self.xi_max_khz)),
        )


class DatasetMeta(msgspec.Struct, forbid_unknown_fields=True):
    """Sidecar written next to every dataset CSV."""

    format_version: int
    sensor: SensorSpec
    grid: GridRecord
    plan: PlanRecord
    ranges: RangesRecord
    noiseless: bool
    split_by_target: bool
    grid_index: list[int]
    omega_min_khz: Optional[float] = None
    input_scaling: str = INPUT_SCALING
    config_hash: str = ""


class LayerRecord(msgspec.Struct, forbid_unknown_fields=True):
    """One affine layer; weights are row-major with shape (n_out, n_in)."""

    n_in: int
    n_out: int
    activation: str
    weights: list[list[float]]
    biases: list[float]


class TrainingRecord(msgspec.Struct, forbid_unknown_fields=True):
    optimizer: str
    init_seed: int
    dataset_seed: int
    stop_epoch: int
    stop_reason: str
    final_costs: dict[str, float]


class ModelFile(msgspec.Struct, forbid_unknown_fields=True):
    """Trained network plus everything inference needs to agree with training."""

    format_version: int
    layer_sizes: list[int]
    layers: list[LayerRecord]
    ranges: RangesRecord
    window_s: tuple[float, float]
    n_points: int
    input_scaling: str = INPUT_SCALING
    training: Optional[TrainingRecord] = None
    config_hash: str = ""
