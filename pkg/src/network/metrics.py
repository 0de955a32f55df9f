"""Accuracy, regression and error-histogram metrics of a trained network."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from scipy import stats

from ..acquisition.rescale import rescale_targets, unscale_outputs
from ..errors import PhysicsInputError
from ..models.acquisition import RescaleRanges
from ..models.network import Metrics, NetworkParams, RegressionFit, RestartSummary
from ..units import khz_to_rad
from .mlp import forward

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 20

# Rows with |xi|/2pi below this (kHz) have no meaningful relative detuning error.
XI_EXCLUSION_KHZ = 0.005


def _fit(a: np.ndarray, y: np.ndarray) -> RegressionFit:
    if a.size < 2 or np.ptp(a) == 0:
        return RegressionFit(alpha=float("nan"), beta=float("nan"), r=float("nan"))
    result = stats.linregress(a, y)
    return RegressionFit(
        alpha=float(result.slope), beta=float(result.intercept), r=float(result.rvalue)
    )


def _pearson(a: np.ndarray, y: np.ndarray) -> float:
    if a.size < 2 or np.ptp(a) == 0 or np.ptp(y) == 0:
        return float("nan")
    return float(stats.pearsonr(a, y)[0])


def accuracies(outputs: np.ndarray, targets: np.ndarray) -> tuple[float, float, int]:
    """(F1, F2, rows excluded from F2) in physical units.

    F1 = 1 - mean |y1 - Omega| / Omega and F2 = 1 - mean |y2 - xi| / |xi|.
    """
    omega, xi = targets[:, 0], targets[:, 1]
    f1 = 1.0 - float(np.mean(np.abs(outputs[:, 0] - omega) / omega))
    usable = np.abs(xi) >= float(khz_to_rad(XI_EXCLUSION_KHZ))
    excluded = int(np.count_nonzero(~usable))
    if excluded:
        logger.info("%d example(s) near resonance excluded from F2", excluded)
    if not np.any(usable):
        return f1, float("nan"), excluded
    f2 = 1.0 - float(np.mean(np.abs(outputs[usable, 1] - xi[usable]) / np.abs(xi[usable])))
    return f1, f2, excluded


def evaluate_outputs(
    outputs_rescaled: np.ndarray,
    targets: np.ndarray,
    ranges: RescaleRanges,
) -> Metrics:
    """Metrics from rescaled network outputs and physical (rad/s) targets."""
    outputs_rescaled = np.asarray(outputs_rescaled, dtype=float).reshape(-1, 2)
    targets = np.asarray(targets, dtype=float).reshape(-1, 2)
    if targets.shape[0] == 0:
        raise PhysicsInputError("no examples to evaluate")
    a = rescale_targets(targets, ranges)
    f1, f2, excluded = accuracies(unscale_outputs(outputs_rescaled, ranges), targets)

    errors = (outputs_rescaled - a).ravel()
    counts, edges = np.histogram(errors, bins=HISTOGRAM_BINS)
    return Metrics(
        n_examples=targets.shape[0],
        f1=f1,
        f2=f2,
        f2_excluded=excluded,
        fits=[_fit(a[:, k], outputs_rescaled[:, k]) for k in range(2)],
        pooled_r=_pearson(a.ravel(), outputs_rescaled.ravel()),
        histogram_counts=[int(c) for c in counts],
        histogram_edges=[float(e) for e in edges],
        cost=float(np.mean(np.sum((outputs_rescaled - a) ** 2, axis=1)) / 2.0),
    )


def evaluate(
    net: NetworkParams,
    inputs: np.ndarray,
    targets: np.ndarray,
    ranges: RescaleRanges | None = None,
) -> Metrics:
    """Run the network on `inputs` and score it against physical targets."""
    ranges = ranges or net.ranges or RescaleRanges.global_ranges()
    return evaluate_outputs(forward(net, np.atleast_2d(inputs)), targets, ranges)


def restart_summary(seeds: Sequence[int], test_costs: Sequence[float]) -> RestartSummary:
    costs = np.asarray(test_costs, dtype=float)
    return RestartSummary(
        seeds=list(seeds),
        test_costs=[float(c) for c in costs],
        mean=float(np.mean(costs)),
        std=float(np.std(costs, ddof=1)) if costs.size > 1 else 0.0,
    )
