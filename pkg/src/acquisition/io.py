"""Dataset persistence: CSV rows plus a JSON metadata sidecar."""

from __future__ import annotations

import logging
from pathlib import Path

import msgspec
import numpy as np

from ..errors import FormatError
from ..models.acquisition import Dataset, Split
from ..models.files import (
    FORMAT_VERSION,
    INPUT_SCALING,
    DatasetMeta,
    GridRecord,
    PlanRecord,
    RangesRecord,
    SensorSpec,
)
from ..output.csv_writer import read_csv, write_csv
from ..units import khz_to_rad, rad_to_khz

logger = logging.getLogger(__name__)

TARGET_COLUMNS = ["omega_tg_khz", "xi_khz", "rep", "split"]


def probability_columns(n_points: int) -> list[str]:
    return [f"p_{i:03d}" for i in range(1, n_points + 1)]


def meta_path(path: Path) -> Path:
    """data.csv -> data.meta.json"""
    return Path(path).with_suffix(".meta.json")


def write_dataset(path: Path, dataset: Dataset, config_hash: str = "") -> Path:
    """Write the dataset CSV and its sidecar; returns the CSV path."""
    if dataset.sensor is None:
        raise FormatError("dataset has no sensor config attached")
    path = Path(path)
    header = TARGET_COLUMNS + probability_columns(dataset.inputs.shape[1])
    omega_khz = rad_to_khz(dataset.targets[:, 0])
    xi_khz = rad_to_khz(dataset.targets[:, 1])
    rows = (
        [float(omega_khz[i]), float(xi_khz[i]), int(dataset.repetitions[i]), dataset.splits[i]]
        + [float(p) for p in dataset.inputs[i]]
        for i in range(len(dataset))
    )
    comments = {
        "seed": dataset.plan.seed,
        "config_hash": config_hash,
        "units": "kHz",
        **dataset.metadata,
    }
    write_csv(path, header, rows, comments)

    meta = DatasetMeta(
        format_version=FORMAT_VERSION,
        sensor=SensorSpec.from_config(dataset.sensor),
        grid=GridRecord.from_spec(dataset.grid),
        plan=PlanRecord.from_plan(dataset.plan),
        ranges=RangesRecord.from_ranges(dataset.ranges),
        noiseless=dataset.noiseless,
        split_by_target=dataset.split_by_target,
        grid_index=[int(g) for g in dataset.grid_index],
        omega_min_khz=dataset.omega_min_khz,
        config_hash=config_hash,
    )
    meta_path(path).write_bytes(msgspec.json.format(msgspec.json.encode(meta), indent=2))
    logger.info("wrote %d examples to %s", len(dataset), path)
    return path


def read_dataset_meta(path: Path) -> DatasetMeta:
    sidecar = meta_path(path)
    if not sidecar.exists():
        raise FormatError(f"missing metadata sidecar {sidecar}")
    try:
        meta = msgspec.json.decode(sidecar.read_bytes(), type=DatasetMeta)
    except msgspec.ValidationError as e:
        raise FormatError(f"invalid dataset metadata {sidecar}: {e}") from e
    except msgspec.DecodeError as e:
        raise FormatError(f"malformed dataset metadata {sidecar}: {e}") from e
    if meta.format_version != FORMAT_VERSION:
        raise FormatError(f"unsupported dataset format version {meta.format_version}")
    if meta.input_scaling != INPUT_SCALING:
        raise FormatError(f"unsupported input scaling {meta.input_scaling!r}")
    return meta


def read_dataset(path: Path) -> Dataset:
    """Load a dataset written by write_dataset."""
    meta = read_dataset_meta(path)
    comments, header, rows = read_csv(path)
    n_points = meta.plan.n_points
    expected = TARGET_COLUMNS + probability_columns(n_points)
    if header != expected:
        raise FormatError(
            f"{path}: header does not match a {n_points}-point dataset "
            f"(got {len(header)} columns)"
        )
    if len(rows) != len(meta.grid_index):
        raise FormatError(f"{path}: {len(rows)} rows but metadata lists {len(meta.grid_index)}")

    try:
        table = np.array([[float(r[0]), float(r[1])] + [float(v) for v in r[4:]] for r in rows])
        reps = np.array([int(r[2]) for r in rows], dtype=int)
        splits = np.array([Split(r[3]).value for r in rows], dtype=str)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e
    if table.size == 0:
        table = np.empty((0, 2 + n_points))
    inputs = table[:, 2:]
    if np.any((inputs < 0) | (inputs > 1)):
        raise FormatError(f"{path}: probabilities outside [0, 1]")

    return Dataset(
        inputs=inputs,
        targets=np.column_stack([khz_to_rad(table[:, 0]), khz_to_rad(table[:, 1])]),
        repetitions=reps,
        grid_index=np.array(meta.grid_index, dtype=int),
        splits=splits,
        grid=meta.grid.to_spec(),
        ranges=meta.ranges.to_ranges(),
        plan=meta.plan.to_plan(),
        noiseless=meta.noiseless,
        split_by_target=meta.split_by_target,
        omega_min_khz=meta.omega_min_khz,
        sensor=meta.sensor.to_config(),
        metadata={k: v for k, v in comments.items() if k not in ("seed", "units")},
    )
