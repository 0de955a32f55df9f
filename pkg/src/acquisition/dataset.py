"""Dataset generation: grid x repetitions of simulated acquisitions."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import PhysicsInputError
from ..models.acquisition import (
    SPLIT_FRACTIONS,
    AcquisitionPlan,
    Dataset,
    GridSpec,
    RescaleRanges,
    Split,
)
from ..models.sensor import SensorConfig
from ..physics.forward import ForwardModel
from ..physics.integrator import MAX_HORIZON
from .grid import build_grid, filter_omega
from .shots import sample_probabilities
from .streams import StreamFactory

logger = logging.getLogger(__name__)


def split_counts(n: int) -> tuple[int, int, int]:
    """(train, validation, test) sizes; test takes the rounding remainder."""
    n_train = round(SPLIT_FRACTIONS[Split.TRAIN] * n)
    n_val = min(round(SPLIT_FRACTIONS[Split.VALIDATION] * n), n - n_train)
    return n_train, n_val, n - n_train - n_val


def assign_splits(
    n: int,
    rng: np.random.Generator,
    groups: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Random 70/15/15 split labels for n rows.

    With `groups`, whole groups are assigned together (every repetition of a
    grid node lands in the same split).
    """
    labels = np.empty(n, dtype=object)
    if groups is None:
        order = rng.permutation(n)
        n_train, n_val, _ = split_counts(n)
        labels[order[:n_train]] = Split.TRAIN.value
        labels[order[n_train : n_train + n_val]] = Split.VALIDATION.value
        labels[order[n_train + n_val :]] = Split.TEST.value
        return labels.astype(str)

    unique = np.unique(groups)
    group_labels = assign_splits(unique.size, rng)
    lookup = dict(zip(unique.tolist(), group_labels.tolist()))
    return np.array([lookup[g] for g in groups.tolist()], dtype=str)


def generate_dataset(
    cfg: SensorConfig,
    grid: GridSpec,
    plan: AcquisitionPlan,
    noiseless: bool,
    *,
    split_by_target: bool = False,
    omega_min_khz: Optional[float] = None,
    ranges: Optional[RescaleRanges] = None,
    step: Optional[float] = None,
    workers: int = 1,
    cache_dir: Optional[Path] = None,
) -> Dataset:
    """Simulate every grid node and repetition and assign splits.

    Each grid node is integrated once; noisy repetitions resample the same
    noiseless trace from their own stream.
    """
    if plan.window[1] > MAX_HORIZON * (1 + 1e-12):
        raise PhysicsInputError(
            f"window end {plan.window[1]:.6g} s is beyond the integration horizon "
            f"{MAX_HORIZON:.6g} s"
        )
    ranges = ranges or RescaleRanges.global_ranges()
    targets = build_grid(grid.omega_range, grid.n_omega, grid.xi_range, grid.n_xi)
    nodes = list(range(len(targets)))
    if omega_min_khz is not None:
        nodes = filter_omega(targets, omega_min_khz)
        if not nodes:
            raise PhysicsInputError(f"no grid node has Omega_tg/2pi >= {omega_min_khz} kHz")
        logger.info(
            "kept %d of %d grid nodes above %.4g kHz", len(nodes), len(targets), omega_min_khz
        )

    times = plan.times()
    forward = ForwardModel(cfg, times, step=step, workers=workers, cache_dir=cache_dir)
    traces = forward.traces([targets[i] for i in nodes])
    forward.save()

    streams = StreamFactory(plan.seed)
    n_rows = len(nodes) * plan.repetitions
    inputs = np.empty((n_rows, times.size))
    target_values = np.empty((n_rows, 2))
    repetitions = np.empty(n_rows, dtype=int)
    grid_index = np.empty(n_rows, dtype=int)

    row = 0
    for trace, node in zip(traces, nodes):
        tgt = targets[node]
        for rep in range(plan.repetitions):
            if noiseless:
                inputs[row] = np.clip(trace, 0.0, 1.0)
            else:
                inputs[row] = sample_probabilities(trace, plan.n_shots, streams.shots(node, rep))
            target_values[row] = (tgt.rabi, tgt.detuning)
            repetitions[row] = rep
            grid_index[row] = node
            row += 1

    splits = assign_splits(
        n_rows, streams.split(), groups=grid_index if split_by_target else None
    )
    logger.info("generated %d examples (%s)", n_rows, "noiseless" if noiseless else "noisy")

    return Dataset(
        inputs=inputs,
        targets=target_values,
        repetitions=repetitions,
        grid_index=grid_index,
        splits=splits,
        grid=grid,
        ranges=ranges,
        plan=plan,
        noiseless=noiseless,
        split_by_target=split_by_target,
        omega_min_khz=omega_min_khz,
        sensor=cfg,
    )
