"""Counter-based random streams, one per (grid node, repetition).

Each stream is derived from the run seed through a SeedSequence spawn key, so
the draws for a given example do not depend on how many other examples were
generated before it, or in which worker.
"""

from __future__ import annotations

import numpy as np

# Spawn-key prefixes keep the split stream apart from the shot streams.
SHOT_STREAM = 0
SPLIT_STREAM = 1
TRIAL_STREAM = 2


class StreamFactory:
    """Deterministic np.random.Generator factory for one run seed."""

    def __init__(self, seed: int):
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def _generator(self, *key: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self._seed, spawn_key=tuple(int(k) for k in key))
        return np.random.Generator(np.random.Philox(seq))

    def shots(self, grid_index: int, repetition: int) -> np.random.Generator:
        """Stream for the shot noise of one example."""
        return self._generator(SHOT_STREAM, grid_index, repetition)

    def split(self) -> np.random.Generator:
        """Stream for the train/validation/test assignment."""
        return self._generator(SPLIT_STREAM)

    def trial(self, index: int) -> np.random.Generator:
        """Stream for one estimator-spread trial."""
        return self._generator(TRIAL_STREAM, index)
