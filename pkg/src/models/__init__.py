"""Domain records for qsense."""

from .acquisition import (
    SPLIT_FRACTIONS,
    AcquisitionPlan,
    Dataset,
    Example,
    GridSpec,
    RescaleRanges,
    ShotRecord,
    Split,
)
from .network import (
    LAYER_SIZES,
    EpochRecord,
    Metrics,
    NetworkParams,
    RegressionFit,
    RestartSummary,
    TrainConfig,
    TrainReport,
)
from .precision import EstimatorStats, Posterior, QfiResult
from .sensor import Level, QuantumState, ResponseTrace, SensorConfig, TargetParams

__all__ = [
    "SPLIT_FRACTIONS",
    "AcquisitionPlan",
    "Dataset",
    "Example",
    "GridSpec",
    "RescaleRanges",
    "ShotRecord",
    "Split",
    "LAYER_SIZES",
    "EpochRecord",
    "Metrics",
    "NetworkParams",
    "RegressionFit",
    "RestartSummary",
    "TrainConfig",
    "TrainReport",
    "EstimatorStats",
    "Posterior",
    "QfiResult",
    "Level",
    "QuantumState",
    "ResponseTrace",
    "SensorConfig",
    "TargetParams",
]
