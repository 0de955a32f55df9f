"""Binary cache of forward-model traces.

Simulated P_D traces are expensive (millions of RK4 steps each), and the
Bayesian estimator and repeated dataset builds ask for the same (Omega_tg, xi)
nodes again. Traces are stored in a .traces-<key>.cache file next to the run's
outputs, keyed by a digest of the sensor config, time grid and step.

Uses msgspec.msgpack for safe, fast serialization (no pickle).
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import msgspec
import numpy as np

from ..models.sensor import SensorConfig

logger = logging.getLogger(__name__)

CACHE_VERSION = 1

TraceKey = tuple[float, float]


class TraceEntry(msgspec.Struct, array_like=True):
    rabi: float
    detuning: float
    p_d: list[float]


class TraceCacheData(msgspec.Struct):
    """Full cache structure for msgspec.msgpack serialization."""

    cache_version: int
    model_key: str
    entries: list[TraceEntry]


def model_key(cfg: SensorConfig, times: np.ndarray, step: float | None) -> str:
    """Digest identifying everything a trace depends on besides the target."""
    payload = msgspec.json.encode(
        {
            "sensor": asdict(cfg),
            "times": [float(t) for t in times],
            "step": step,
        }
    )
    return hashlib.sha256(payload).hexdigest()


def get_cache_path(directory: Path, key: str) -> Path:
    """One cache file per model key, so several models can share a directory."""
    return Path(directory) / f".traces-{key[:16]}.cache"


_encoder = msgspec.msgpack.Encoder()
_decoder = msgspec.msgpack.Decoder(TraceCacheData)


def write_cache(path: Path, key: str, traces: dict[TraceKey, np.ndarray]) -> Optional[Path]:
    """Serialize memoized traces; returns the path or None if the write failed."""
    try:
        data = TraceCacheData(
            cache_version=CACHE_VERSION,
            model_key=key,
            entries=[
                TraceEntry(rabi=r, detuning=d, p_d=[float(p) for p in trace])
                for (r, d), trace in sorted(traces.items())
            ],
        )
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(_encoder.encode(data))
        return path
    except (OSError, msgspec.EncodeError) as e:
        logger.debug(f"Failed to write trace cache: {e}")
        return None


def read_cache(path: Path, key: str) -> dict[TraceKey, np.ndarray]:
    """Load traces for `key`; empty if the cache is missing, stale or corrupt."""
    if not path.exists():
        return {}
    try:
        with open(path, "rb") as f:
            data = _decoder.decode(f.read())
    except (OSError, msgspec.DecodeError, ValueError) as e:
        logger.debug(f"Failed to read trace cache: {e}")
        return {}

    if data.cache_version != CACHE_VERSION:
        logger.debug("Trace cache version mismatch")
        return {}
    if data.model_key != key:
        logger.debug("Trace cache belongs to another sensor/time grid, ignored")
        return {}

    return {(e.rabi, e.detuning): np.asarray(e.p_d, dtype=float) for e in data.entries}
