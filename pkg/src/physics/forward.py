"""Memoized forward model: (Omega_tg, xi) -> noiseless P_D on a fixed time grid."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from ..models.sensor import SensorConfig, TargetParams
from .cache import TraceKey, get_cache_path, model_key, read_cache, write_cache
from .integrator import integrate_states, survival

logger = logging.getLogger(__name__)


def _integrate_block(
    cfg: SensorConfig,
    targets: list[TargetParams],
    times: np.ndarray,
    step: Optional[float],
) -> np.ndarray:
    return survival(integrate_states(cfg, targets, times, step))


def simulate_traces(
    cfg: SensorConfig,
    targets: Sequence[TargetParams],
    times: np.ndarray,
    step: Optional[float] = None,
    workers: int = 1,
) -> np.ndarray:
    """Noiseless traces (B, n) for many targets, split across `workers` processes.

    Trajectories are independent, so the block split does not change results;
    blocks are concatenated back in input order.
    """
    targets = list(targets)
    if not targets:
        return np.empty((0, len(times)))
    if workers <= 1 or len(targets) < 2:
        return _integrate_block(cfg, targets, times, step)

    blocks = [list(b) for b in np.array_split(np.arange(len(targets)), workers) if len(b)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_integrate_block, cfg, [targets[i] for i in block], times, step)
            for block in blocks
        ]
        return np.concatenate([f.result() for f in futures], axis=0)


class ForwardModel:
    """Noiseless sensor response on a fixed time grid, memoized per target."""

    def __init__(
        self,
        cfg: SensorConfig,
        times: Sequence[float] | np.ndarray,
        step: Optional[float] = None,
        workers: int = 1,
        cache_dir: Optional[Path] = None,
    ):
        self.cfg = cfg
        self.times = np.asarray(times, dtype=float)
        self.step = step
        self.workers = workers
        self._key = model_key(cfg, self.times, step)
        self._cache_path = get_cache_path(cache_dir, self._key) if cache_dir is not None else None
        self._memo: dict[TraceKey, np.ndarray] = {}
        if self._cache_path is not None:
            self._memo.update(read_cache(self._cache_path, self._key))
            logger.debug("loaded %d cached traces", len(self._memo))

    def __len__(self) -> int:
        return len(self._memo)

    def traces(self, targets: Sequence[TargetParams]) -> np.ndarray:
        """P_D traces (B, n_times) for `targets`, computing only unseen ones."""
        keys = [(t.rabi, t.detuning) for t in targets]
        missing = list(dict.fromkeys(k for k in keys if k not in self._memo))
        if missing:
            logger.info("simulating %d new trace(s)", len(missing))
            fresh = simulate_traces(
                self.cfg,
                [TargetParams(r, d) for r, d in missing],
                self.times,
                self.step,
                self.workers,
            )
            for key, trace in zip(missing, fresh):
                self._memo[key] = trace
        if not keys:
            return np.empty((0, self.times.size))
        return np.stack([self._memo[k] for k in keys])

    def trace(self, tgt: TargetParams) -> np.ndarray:
        return self.traces([tgt])[0]

    def save(self) -> Optional[Path]:
        if self._cache_path is None:
            return None
        return write_cache(self._cache_path, self._key, self._memo)
