"""qsense - dressed-state 171Yb+ magnetometer simulation and parameter estimation."""

from .config import RunConfig, load_config
from .errors import ConfigError, FormatError, NumericalError, PhysicsInputError, QsenseError
from .models import SensorConfig, TargetParams

__version__ = "0.1.0"

__all__ = [
    "RunConfig",
    "load_config",
    "ConfigError",
    "FormatError",
    "NumericalError",
    "PhysicsInputError",
    "QsenseError",
    "SensorConfig",
    "TargetParams",
]
