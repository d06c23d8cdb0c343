"""Deterministic random-number streams.

Every stochastic routine takes an explicit ``numpy.random.Generator``.  Ensemble
drivers derive independent substreams from a master seed and an integer path
(e.g. ``(task, chunk)``), so results are reproducible bit-for-bit and do not
depend on how work is split across processes.
"""
from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator keyed by (master seed, integer path).

    Streams with different paths are statistically independent; equal
    (seed, path) always yields the identical stream.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(path))))
