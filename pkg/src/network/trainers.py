"""Full-batch trainers: plain gradient descent and Levenberg-Marquardt."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..errors import PhysicsInputError, TrainingDiverged
from ..models.acquisition import Dataset, Split
from ..models.network import EpochRecord, NetworkParams, TrainConfig, TrainReport
from .mlp import cost, flatten, gradient, normal_equations, unflatten

logger = logging.getLogger(__name__)

Batch = tuple[np.ndarray, np.ndarray]


@dataclass
class TrainingData:
    """Inputs and rescaled targets for each split."""

    train: Batch
    validation: Optional[Batch] = None
    test: Optional[Batch] = None

    @classmethod
    def from_dataset(cls, dataset: Dataset) -> TrainingData:
        def part(split: Split) -> Optional[Batch]:
            X, A = dataset.split(split)
            return (X, A) if X.shape[0] else None

        train = part(Split.TRAIN)
        if train is None:
            raise PhysicsInputError("dataset has no training examples")
        return cls(train=train, validation=part(Split.VALIDATION), test=part(Split.TEST))


class Trainer(ABC):
    """Epoch loop shared by the optimizers.

    Stops when the gradient infinity norm drops below the tolerance, when the
    validation cost rises `patience` epochs in a row, or after max_epochs
    updates. Returns the parameters with the lowest validation cost (training
    cost when there is no validation split).
    """

    name = ""

    def __init__(self, config: TrainConfig):
        self.config = config

    @abstractmethod
    def update(
        self,
        net: NetworkParams,
        X: np.ndarray,
        A: np.ndarray,
        current_cost: float,
        grad: np.ndarray,
    ) -> Optional[NetworkParams]:
        """One epoch's parameter update; None when no acceptable step exists."""

    def reset(self) -> None:
        pass

    def extra(self) -> Optional[float]:
        return None

    def fit(self, net: NetworkParams, data: TrainingData) -> tuple[NetworkParams, TrainReport]:
        cfg = self.config
        self.reset()
        X, A = data.train
        report = TrainReport()
        best, best_monitor = net, math.inf
        previous_val: Optional[float] = None
        rises = 0

        for epoch in range(cfg.max_epochs + 1):
            train_cost = cost(net, X, A)
            if not math.isfinite(train_cost):
                report.stop_epoch, report.stop_reason = epoch, "diverged"
                raise TrainingDiverged(f"training cost is non-finite at epoch {epoch}", report)
            grad = gradient(net, X, A)
            grad_norm = float(np.max(np.abs(grad)))
            val_cost = cost(net, *data.validation) if data.validation else None
            test_cost = cost(net, *data.test) if data.test else None
            report.history.append(
                EpochRecord(epoch, train_cost, val_cost, test_cost, grad_norm, self.extra())
            )
            logger.info(
                "epoch %d: train %.4e val %s grad %.3e",
                epoch,
                train_cost,
                f"{val_cost:.4e}" if val_cost is not None else "-",
                grad_norm,
            )

            monitor = val_cost if val_cost is not None else train_cost
            if monitor < best_monitor:
                best, best_monitor, report.best_epoch = net, monitor, epoch

            if grad_norm < cfg.gradient_tolerance:
                report.stop_epoch, report.stop_reason = epoch, "gradient"
                break
            if val_cost is not None:
                rises = rises + 1 if previous_val is not None and val_cost > previous_val else 0
                previous_val = val_cost
                if rises >= cfg.patience:
                    report.stop_epoch, report.stop_reason = epoch, "validation"
                    break
            if epoch == cfg.max_epochs:
                report.stop_epoch, report.stop_reason = epoch, "max_epochs"
                break

            try:
                updated = self.update(net, X, A, train_cost, grad)
            except TrainingDiverged as e:
                report.stop_epoch, report.stop_reason = epoch, "diverged"
                e.report = report
                raise
            if updated is None:
                logger.warning("no cost-reducing step found at epoch %d; stopping", epoch)
                report.stop_epoch, report.stop_reason = epoch, "damping"
                break
            net = updated

        logger.info(
            "%s stopped at epoch %d (%s); best epoch %d",
            self.name,
            report.stop_epoch,
            report.stop_reason,
            report.best_epoch,
        )
        return best, report


class GradientDescent(Trainer):
    """theta <- theta - eta dC/dtheta."""

    name = "gd"

    def update(self, net, X, A, current_cost, grad):
        theta = flatten(net) - self.config.learning_rate * grad
        if not np.all(np.isfinite(theta)):
            raise TrainingDiverged("parameters became non-finite")
        return unflatten(net, theta)


def damped_step(jtj: np.ndarray, jte: np.ndarray, mu: float) -> np.ndarray:
    """Solve (J^T J + mu I) delta = J^T e by Cholesky."""
    factor = cho_factor(jtj + mu * np.eye(jtj.shape[0]))
    return cho_solve(factor, jte)


class LevenbergMarquardt(Trainer):
    """Damped Gauss-Newton on the training residuals e = a - y.

    A step is accepted only if it lowers the training cost; mu is divided by
    mu_down on acceptance and multiplied by mu_up on rejection or when the
    damped system is not positive definite.
    """

    name = "lm"

    def __init__(self, config: TrainConfig, chunk: int = 512):
        super().__init__(config)
        self.chunk = chunk
        self.mu = config.mu0

    def reset(self) -> None:
        self.mu = self.config.mu0

    def extra(self) -> Optional[float]:
        return self.mu

    def update(self, net, X, A, current_cost, grad):
        cfg = self.config
        jtj, jte = normal_equations(net, X, A, self.chunk)
        theta = flatten(net)
        while self.mu <= cfg.mu_max:
            try:
                delta = damped_step(jtj, jte, self.mu)
            except LinAlgError:
                logger.debug("damped system not positive definite at mu=%.3g", self.mu)
                self.mu *= cfg.mu_up
                continue
            if not np.all(np.isfinite(delta)):
                self.mu *= cfg.mu_up
                continue
            candidate = unflatten(net, theta + delta)
            if cost(candidate, X, A) < current_cost:
                self.mu = max(self.mu / cfg.mu_down, np.finfo(float).tiny)
                return candidate
            self.mu *= cfg.mu_up
        return None


def make_trainer(config: TrainConfig) -> Trainer:
    if config.optimizer == "gd":
        return GradientDescent(config)
    return LevenbergMarquardt(config)


def train_gd(
    net: NetworkParams, data: TrainingData, config: TrainConfig
) -> tuple[NetworkParams, TrainReport]:
    if config.optimizer != "gd":
        raise PhysicsInputError("train_gd needs optimizer = 'gd'")
    return GradientDescent(config).fit(net, data)


def train_lm(
    net: NetworkParams, data: TrainingData, config: TrainConfig
) -> tuple[NetworkParams, TrainReport]:
    if config.optimizer != "lm":
        raise PhysicsInputError("train_lm needs optimizer = 'lm'")
    return LevenbergMarquardt(config).fit(net, data)


def train(
    net: NetworkParams, data: TrainingData, config: TrainConfig
) -> tuple[NetworkParams, TrainReport]:
    return make_trainer(config).fit(net, data)
