"""Affine rescaling of targets onto [0, 1] and back."""

from __future__ import annotations

import logging

import numpy as np

from ..models.acquisition import RescaleRanges

logger = logging.getLogger(__name__)


def rescale_targets(targets: np.ndarray, ranges: RescaleRanges) -> np.ndarray:
    """(Omega_tg, xi) in rad/s -> [0, 1] per component. Shape (..., 2).

    Values outside the ranges map outside [0, 1] and are logged, not clipped.
    """
    targets = np.asarray(targets, dtype=float)
    scaled = (targets - ranges.lower) / ranges.span
    outside = out_of_range(scaled)
    if np.any(outside):
        logger.warning("%d target value(s) fall outside the rescale ranges", int(outside.sum()))
    return scaled


def unscale_outputs(outputs: np.ndarray, ranges: RescaleRanges) -> np.ndarray:
    """Inverse of rescale_targets."""
    return np.asarray(outputs, dtype=float) * ranges.span + ranges.lower


def out_of_range(scaled: np.ndarray) -> np.ndarray:
    """Boolean mask of rescaled entries outside [0, 1]."""
    scaled = np.asarray(scaled, dtype=float)
    return (scaled < 0.0) | (scaled > 1.0)
