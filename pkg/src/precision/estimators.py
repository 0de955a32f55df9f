"""Estimators of (Omega_tg, xi) from a single record, and their spread over trials."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import numpy as np

from ..acquisition.rescale import unscale_outputs
from ..acquisition.shots import noiseless_record, sample_shots
from ..acquisition.streams import StreamFactory
from ..errors import FormatError, PhysicsInputError
from ..models.acquisition import AcquisitionPlan, RescaleRanges, ShotRecord
from ..models.network import NetworkParams
from ..models.precision import EstimatorStats, Posterior
from ..models.sensor import ResponseTrace, SensorConfig, TargetParams
from ..network.mlp import forward
from ..physics.forward import ForwardModel
from .bayes import BayesSearch, PosteriorSearch, Window

logger = logging.getLogger(__name__)


class Estimator(ABC):
    """Maps one measured record to (Omega_tg, xi) in rad/s."""

    name = ""

    @abstractmethod
    def estimate(self, record: ShotRecord) -> np.ndarray:
        """Estimate for one record: array (2,) in rad/s."""


class NetworkEstimator(Estimator):
    name = "network"

    def __init__(self, net: NetworkParams, ranges: Optional[RescaleRanges] = None):
        self.net = net
        self.ranges = ranges or net.ranges or RescaleRanges.global_ranges()

    def estimate(self, record: ShotRecord) -> np.ndarray:
        if record.p.size != self.net.n_inputs:
            raise FormatError(
                f"record has {record.p.size} points but the network expects {self.net.n_inputs}"
            )
        return unscale_outputs(forward(self.net, record.p), self.ranges)


class BayesEstimator(Estimator):
    """Posterior mean of the grid Bayesian estimator.

    With lock_window, the zoom window found for the first record is reused
    for later ones, so repeated trials only re-weight memoized traces.
    """

    name = "bayes"

    def __init__(
        self,
        cfg: SensorConfig,
        times: np.ndarray,
        n_shots: int,
        search: BayesSearch = BayesSearch(),
        lock_window: bool = False,
        step: Optional[float] = None,
        workers: int = 1,
        cache_dir: Optional[Path] = None,
    ):
        if n_shots < 1:
            raise PhysicsInputError("n_shots must be >= 1")
        self.n_shots = n_shots
        self.lock_window = lock_window
        self.searcher = PosteriorSearch(cfg, times, search, step, workers, cache_dir)
        self.window: Optional[Window] = None
        self.last_posterior: Optional[Posterior] = None

    def estimate(self, record: ShotRecord) -> np.ndarray:
        sigma = 1.0 / np.sqrt(self.n_shots)
        if self.lock_window and self.window is not None:
            posterior = self.searcher.on_window(record.p, sigma, self.window)
        else:
            self.window, posterior = self.searcher.find_window(record.p, sigma)
        if posterior.truncated:
            logger.warning("posterior truncated (boundary mass %.2g)", posterior.boundary_mass)
        self.last_posterior = posterior
        return posterior.mean.copy()


def estimator_statistics(
    estimator: Estimator,
    cfg: SensorConfig,
    target: TargetParams,
    plan: AcquisitionPlan,
    n_trials: int,
    noiseless: bool = False,
    step: Optional[float] = None,
) -> EstimatorStats:
    """Run the estimator on n_trials independent records of one target.

    Trial i draws its shots from stream i of plan.seed.
    """
    if n_trials < 2:
        raise PhysicsInputError("n_trials must be >= 2")
    times = plan.times()
    trace = ResponseTrace(times, np.clip(ForwardModel(cfg, times, step).trace(target), 0.0, 1.0))
    streams = StreamFactory(plan.seed)

    estimates = np.empty((n_trials, 2))
    for i in range(n_trials):
        if noiseless:
            record = noiseless_record(trace)
        else:
            record = sample_shots(trace, plan.n_shots, streams.trial(i))
        estimates[i] = estimator.estimate(record)
        logger.debug("trial %d/%d: %s", i + 1, n_trials, estimates[i])

    return EstimatorStats(
        estimator=estimator.name,
        target=target,
        n_trials=n_trials,
        estimates=estimates,
        mean=estimates.mean(axis=0),
        std=estimates.std(axis=0, ddof=1),
    )
