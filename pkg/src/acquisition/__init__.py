"""Acquisition: shot noise, parameter grids, datasets and rescaling."""

from .dataset import assign_splits, generate_dataset, split_counts
from .grid import (
    OMEGA_THRESHOLDS_KHZ,
    SEPARABILITY_WINDOWS,
    build_grid,
    sweep_targets,
    filter_omega,
    grid_axes,
)
from .io import read_dataset, write_dataset
from .rescale import out_of_range, rescale_targets, unscale_outputs
from .separability import SeparabilityResult, max_separation, shot_level
from .shots import noiseless_record, sample_probabilities, sample_shots
from .streams import StreamFactory

__all__ = [
    "assign_splits",
    "generate_dataset",
    "split_counts",
    "OMEGA_THRESHOLDS_KHZ",
    "SEPARABILITY_WINDOWS",
    "build_grid",
    "sweep_targets",
    "filter_omega",
    "grid_axes",
    "read_dataset",
    "write_dataset",
    "out_of_range",
    "rescale_targets",
    "unscale_outputs",
    "SeparabilityResult",
    "max_separation",
    "shot_level",
    "noiseless_record",
    "sample_probabilities",
    "sample_shots",
    "StreamFactory",
]
