"""Network parameters, training configuration and training reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from ..errors import PhysicsInputError
from .acquisition import RescaleRanges

LAYER_SIZES = (101, 40, 20, 12, 6, 3, 2)

Activation = Literal["tanh", "linear"]
Optimizer = Literal["gd", "lm"]


@dataclass(frozen=True)
class NetworkParams:
    """Weights W_l with shape (n_out, n_in) and biases b_l with shape (n_out,)."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    activations: tuple[Activation, ...]
    ranges: Optional[RescaleRanges] = None
    init_seed: Optional[int] = None

    def __post_init__(self):
        if not (len(self.weights) == len(self.biases) == len(self.activations)):
            raise PhysicsInputError("weights, biases and activations must have equal length")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise PhysicsInputError(f"layer {i}: bias shape {b.shape} vs weights {w.shape}")
            if i and w.shape[1] != self.weights[i - 1].shape[0]:
                raise PhysicsInputError(f"layer {i}: input size does not match previous layer")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise PhysicsInputError(f"layer {i}: non-finite parameters")
        for act in self.activations:
            if act not in ("tanh", "linear"):
                raise PhysicsInputError(f"unknown activation {act!r}")

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def n_inputs(self) -> int:
        return self.weights[0].shape[1]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))


@dataclass(frozen=True)
class TrainConfig:
    optimizer: Optimizer = "lm"
    learning_rate: float = 5e-3
    gradient_tolerance: float = 1e-5
    max_epochs: int = 1000
    mu0: float = 1e-3
    mu_up: float = 10.0
    mu_down: float = 10.0
    mu_max: float = 1e10
    patience: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.optimizer not in ("gd", "lm"):
            raise PhysicsInputError(f"optimizer must be 'gd' or 'lm', got {self.optimizer!r}")
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise PhysicsInputError("learning rate must be positive")
        if not self.gradient_tolerance > 0:
            raise PhysicsInputError("gradient tolerance must be positive")
        if self.max_epochs < 0:
            raise PhysicsInputError("max_epochs must be >= 0")
        if not (self.mu0 > 0 and self.mu_up > 1 and self.mu_down > 1 and self.mu_max > self.mu0):
            raise PhysicsInputError("invalid Levenberg-Marquardt damping schedule")
        if self.patience < 1:
            raise PhysicsInputError("patience must be >= 1")


@dataclass
class EpochRecord:
    epoch: int
    train_cost: float
    validation_cost: Optional[float]
    test_cost: Optional[float]
    gradient_norm: float
    mu: Optional[float] = None


@dataclass
class RegressionFit:
    """y^r = alpha a^r + beta for one output, with its correlation."""

    alpha: float
    beta: float
    r: float


@dataclass
class Metrics:
    """Accuracy and regression figures on one set of examples."""

    n_examples: int
    f1: float
    f2: float
    f2_excluded: int
    fits: list[RegressionFit]
    pooled_r: float
    histogram_counts: list[int]
    histogram_edges: list[float]
    cost: float


@dataclass
class TrainReport:
    history: list[EpochRecord] = field(default_factory=list)
    stop_epoch: int = 0
    stop_reason: str = ""
    best_epoch: int = 0
    metrics: Optional[Metrics] = None

    def final_costs(self) -> dict[str, float]:
        if not self.history:
            return {}
        best = next(
            (r for r in self.history if r.epoch == self.best_epoch), self.history[-1]
        )
        costs = {"train": best.train_cost}
        if best.validation_cost is not None:
            costs["validation"] = best.validation_cost
        if best.test_cost is not None:
            costs["test"] = best.test_cost
        return costs


@dataclass
class RestartSummary:
    """Test-cost spread over several training seeds."""

    seeds: list[int]
    test_costs: list[float]
    mean: float
    std: float
