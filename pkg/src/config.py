"""Run configuration: TOML file -> typed RunConfig, plus environment overrides.

Example:

    [sensor]
    b_field_mt = 1.0

    [grid]
    omega_min_khz = 8.2
    n_xi = 11

    [run]
    seed = 7
"""

from __future__ import annotations

import hashlib
import logging
import os
from pathlib import Path
from typing import Literal, Optional

import msgspec

from .errors import ConfigError, PhysicsInputError
from .models.acquisition import AcquisitionPlan, GridSpec
from .models.network import TrainConfig
from .models.sensor import SensorConfig
from .precision.bayes import BayesSearch

logger = logging.getLogger(__name__)

THREADS_ENV = "QSENSE_THREADS"


class SensorSection(msgspec.Struct, forbid_unknown_fields=True):
    drive_khz: float = 37.27
    b_field_mt: float = 1.0
    gyro_e_mhz_per_g: float = 2.8024
    gyro_n_khz_per_g: float = 4.7248
    hyperfine_ghz: float = 12.643
    ud_coupling: Literal["target", "printed"] = "target"
    secular: bool = False


class GridSection(msgspec.Struct, forbid_unknown_fields=True):
    omega_min_khz: float = 1.0
    omega_max_khz: float = 25.0
    n_omega: int = 241
    xi_min_khz: float = -0.3
    xi_max_khz: float = 0.3
    n_xi: int = 51


class AcquisitionSection(msgspec.Struct, forbid_unknown_fields=True):
    window_t0: tuple[float, float] = (0.5, 1.0)
    n_points: int = 101
    n_shots: int = 100
    repetitions: int = 1
    noiseless: bool = True
    split_by_target: bool = False
    step_fraction: int = 40  # integration points per fastest period


class TrainSection(msgspec.Struct, forbid_unknown_fields=True):
    optimizer: Literal["gd", "lm"] = "lm"
    learning_rate: float = 5e-3
    gradient_tolerance: float = 1e-5
    max_epochs: int = 1000
    mu0: float = 1e-3
    mu_up: float = 10.0
    mu_down: float = 10.0
    mu_max: float = 1e10
    patience: int = 6
    hidden: list[int] = msgspec.field(default_factory=lambda: [40, 20, 12, 6, 3])


class BayesSection(msgspec.Struct, forbid_unknown_fields=True):
    coarse_nodes: int = 41
    posterior_nodes: int = 201
    forward_nodes: int = 15
    zoom_sigmas: float = 5.0
    zoom_passes: int = 2
    coarse_secular: bool = True


class RunSection(msgspec.Struct, forbid_unknown_fields=True):
    output_dir: str = "runs"
    threads: int = 1
    sequential: bool = False
    seed: int = 20210601


class RunConfig(msgspec.Struct, forbid_unknown_fields=True):
    sensor: SensorSection = msgspec.field(default_factory=SensorSection)
    grid: GridSection = msgspec.field(default_factory=GridSection)
    acquisition: AcquisitionSection = msgspec.field(default_factory=AcquisitionSection)
    train: TrainSection = msgspec.field(default_factory=TrainSection)
    bayes: BayesSection = msgspec.field(default_factory=BayesSection)
    run: RunSection = msgspec.field(default_factory=RunSection)

    def sensor_config(self) -> SensorConfig:
        s = self.sensor
        return SensorConfig.default(
            s.b_field_mt,
            drive_khz=s.drive_khz,
            gyro_e_mhz_per_g=s.gyro_e_mhz_per_g,
            gyro_n_khz_per_g=s.gyro_n_khz_per_g,
            hyperfine_ghz=s.hyperfine_ghz,
            ud_coupling=s.ud_coupling,
            secular=s.secular,
        )

    def grid_spec(self) -> GridSpec:
        g = self.grid
        return GridSpec(
            omega_range=(g.omega_min_khz, g.omega_max_khz),
            n_omega=g.n_omega,
            xi_range=(g.xi_min_khz, g.xi_max_khz),
            n_xi=g.n_xi,
        )

    def plan(self) -> AcquisitionPlan:
        a = self.acquisition
        return AcquisitionPlan.in_t0(
            a.window_t0[0],
            a.window_t0[1],
            n_points=a.n_points,
            n_shots=a.n_shots,
            repetitions=a.repetitions,
            seed=self.run.seed,
        )

    def train_config(self, seed: Optional[int] = None) -> TrainConfig:
        t = self.train
        return TrainConfig(
            optimizer=t.optimizer,
            learning_rate=t.learning_rate,
            gradient_tolerance=t.gradient_tolerance,
            max_epochs=t.max_epochs,
            mu0=t.mu0,
            mu_up=t.mu_up,
            mu_down=t.mu_down,
            mu_max=t.mu_max,
            patience=t.patience,
            seed=self.run.seed if seed is None else seed,
        )

    def bayes_search(self) -> BayesSearch:
        b = self.bayes
        return BayesSearch(
            omega_range_khz=(self.grid.omega_min_khz, self.grid.omega_max_khz),
            xi_range_khz=(self.grid.xi_min_khz, self.grid.xi_max_khz),
            coarse_nodes=b.coarse_nodes,
            posterior_nodes=b.posterior_nodes,
            forward_nodes=b.forward_nodes,
            zoom_sigmas=b.zoom_sigmas,
            zoom_passes=b.zoom_passes,
            coarse_secular=b.coarse_secular,
        )

    def layer_sizes(self) -> list[int]:
        return [self.acquisition.n_points, *self.train.hidden, 2]


def validate(cfg: RunConfig) -> RunConfig:
    """Build every derived object once so bad values surface as ConfigError."""
    try:
        cfg.sensor_config()
        cfg.grid_spec()
        cfg.plan()
        cfg.train_config()
        cfg.bayes_search()
    except PhysicsInputError as e:
        raise ConfigError(str(e)) from e
    if cfg.acquisition.step_fraction < 20:
        raise ConfigError("acquisition.step_fraction must be >= 20")
    if cfg.run.threads < 1:
        raise ConfigError("run.threads must be >= 1")
    if any(h < 1 for h in cfg.train.hidden):
        raise ConfigError("train.hidden layer sizes must be positive")
    return cfg


def load_config(path: Optional[Path] = None) -> RunConfig:
    """Read a TOML run configuration; None or a missing default gives the defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        cfg = msgspec.toml.decode(path.read_bytes(), type=RunConfig)
    except msgspec.ValidationError as e:
        raise ConfigError(f"invalid config {path}: {e}") from e
    except msgspec.DecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    logger.debug("loaded config from %s", path)
    return validate(cfg)


def effective_threads(cfg: RunConfig, sequential: bool = False) -> int:
    """Worker count: --sequential > QSENSE_THREADS > run.threads."""
    if sequential or cfg.run.sequential:
        return 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            threads = int(env)
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from e
        if threads < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1")
        return threads
    return cfg.run.threads


def config_hash(cfg: RunConfig) -> str:
    """sha256 of the canonical JSON encoding."""
    return hashlib.sha256(msgspec.json.encode(cfg)).hexdigest()
