"""Deterministic random-number streams.

All stochastic code in this package draws from Philox4x64-10, a
counter-based generator. Independent streams are derived by keying the
generator with an integer tuple (typically ``(master_seed, trial_index,
stream_tag)``), so parallel trials are reproducible regardless of
scheduling and worker count. The algorithm choice is fixed: changing it
changes every simulated number.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

RngLike = Union[np.random.Generator, int, Sequence[int]]

# Stream tags used by the Monte Carlo harness when splitting a trial key.
STREAM_CHANNEL = 0
STREAM_SIGNAL = 1
STREAM_NOISE = 2
STREAM_UNCERTAINTY = 3
STREAM_SEGMENT = 4


def make_rng(*key: int) -> np.random.Generator:
    """Philox generator keyed by one or more integers."""
    if not key:
        raise ValueError("make_rng requires at least one key integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def as_rng(seed: RngLike) -> np.random.Generator:
    """Accept a ready Generator, a single seed, or a key tuple."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (int, np.integer)):
        return make_rng(int(seed))
    return make_rng(*(int(k) for k in seed))
