"""Model files (msgspec JSON) and training report CSVs."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Mapping, Optional

import msgspec
import numpy as np

from ..errors import FormatError, PhysicsInputError
from ..models.files import (
    FORMAT_VERSION,
    INPUT_SCALING,
    LayerRecord,
    ModelFile,
    RangesRecord,
    TrainingRecord,
)
from ..models.network import Metrics, NetworkParams, TrainReport
from ..output.csv_writer import write_csv

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["epoch", "train_cost", "validation_cost", "test_cost", "gradient_norm", "mu"]


def to_model_file(
    net: NetworkParams,
    window: tuple[float, float],
    n_points: int,
    training: Optional[TrainingRecord] = None,
    config_hash: str = "",
) -> ModelFile:
    if net.ranges is None:
        raise FormatError("network has no rescale ranges; cannot be saved for inference")
    if n_points != net.n_inputs:
        raise FormatError(f"network takes {net.n_inputs} inputs but the window has {n_points}")
    layers = [
        LayerRecord(
            n_in=w.shape[1],
            n_out=w.shape[0],
            activation=act,
            weights=w.tolist(),
            biases=b.tolist(),
        )
        for w, b, act in zip(net.weights, net.biases, net.activations)
    ]
    return ModelFile(
        format_version=FORMAT_VERSION,
        layer_sizes=net.layer_sizes,
        layers=layers,
        ranges=RangesRecord.from_ranges(net.ranges),
        window_s=(float(window[0]), float(window[1])),
        n_points=n_points,
        training=training,
        config_hash=config_hash,
    )


def from_model_file(model: ModelFile) -> NetworkParams:
    if model.format_version != FORMAT_VERSION:
        raise FormatError(f"unsupported model format version {model.format_version}")
    if model.input_scaling != INPUT_SCALING:
        raise FormatError(f"unsupported input scaling {model.input_scaling!r}")
    sizes = []
    if model.layers:
        sizes = [model.layers[0].n_in] + [layer.n_out for layer in model.layers]
    if sizes != model.layer_sizes:
        raise FormatError(f"layer records {sizes} do not match layer_sizes {model.layer_sizes}")
    try:
        return NetworkParams(
            weights=tuple(np.array(layer.weights, dtype=float) for layer in model.layers),
            biases=tuple(np.array(layer.biases, dtype=float) for layer in model.layers),
            activations=tuple(layer.activation for layer in model.layers),
            ranges=model.ranges.to_ranges(),
            init_seed=model.training.init_seed if model.training else None,
        )
    except PhysicsInputError as e:
        raise FormatError(f"inconsistent model file: {e}") from e


def save_model(path: Path, model: ModelFile) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(msgspec.json.format(msgspec.json.encode(model), indent=2))
    logger.info("wrote model to %s", path)
    return path


def load_model(path: Path) -> tuple[NetworkParams, ModelFile]:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"model file not found: {path}")
    try:
        model = msgspec.json.decode(path.read_bytes(), type=ModelFile)
    except msgspec.ValidationError as e:
        raise FormatError(f"invalid model file {path}: {e}") from e
    except msgspec.DecodeError as e:
        raise FormatError(f"malformed model file {path}: {e}") from e
    return from_model_file(model), model


def metrics_block(metrics: Metrics) -> dict[str, Any]:
    block: dict[str, Any] = {
        "metrics.n_examples": metrics.n_examples,
        "metrics.cost": metrics.cost,
        "metrics.f1": metrics.f1,
        "metrics.f2": metrics.f2,
        "metrics.f2_excluded": metrics.f2_excluded,
        "metrics.pooled_r": metrics.pooled_r,
    }
    for name, fit in zip(("omega", "xi"), metrics.fits):
        block[f"metrics.{name}.alpha"] = fit.alpha
        block[f"metrics.{name}.beta"] = fit.beta
        block[f"metrics.{name}.r"] = fit.r
    block["metrics.histogram_edges"] = " ".join("%.6g" % e for e in metrics.histogram_edges)
    block["metrics.histogram_counts"] = " ".join(str(c) for c in metrics.histogram_counts)
    return block


def write_report(
    path: Path,
    report: TrainReport,
    comments: Optional[Mapping[str, Any]] = None,
) -> Path:
    """Per-epoch costs followed by the stop information and metrics block."""
    rows = (
        [r.epoch, r.train_cost, r.validation_cost, r.test_cost, r.gradient_norm, r.mu]
        for r in report.history
    )
    footer: dict[str, Any] = {
        "stop_epoch": report.stop_epoch,
        "stop_reason": report.stop_reason,
        "best_epoch": report.best_epoch,
    }
    if report.metrics is not None:
        footer.update(metrics_block(report.metrics))
    return write_csv(path, REPORT_COLUMNS, rows, comments, footer)
