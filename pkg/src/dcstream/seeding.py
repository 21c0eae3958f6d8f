"""Deterministic PRNG management.

All randomness in this package flows from a single 64-bit master seed
through ``numpy.random.SeedSequence``.  A child generator for a given
purpose is obtained by extending the master sequence's spawn key with a
fixed path of small integers:

    SeedSequence(master_seed, spawn_key=path)

so the generator used by e.g. run 7's shuffle is fully determined by
(master_seed, 7, SHUFFLE) regardless of execution order.  The underlying
bit generator is PCG64 (numpy's default 64-bit generator).
"""
from __future__ import annotations

import numpy as np

# Purpose codes appended to seed paths.  Values are part of the
# reproducibility contract: changing them changes every derived stream.
SHUFFLE = 0
INIT = 1
DATA = 2
ORACLE = 3

__all__ = ["SHUFFLE", "INIT", "DATA", "ORACLE", "seed_sequence", "make_rng", "child_seed"]


def seed_sequence(master_seed: int, *path: int) -> np.random.SeedSequence:
    """Child seed sequence for ``path`` under ``master_seed``.

    Args:
        master_seed: 64-bit unsigned master seed.
        *path: fixed nonnegative integers naming the consumer
            (e.g. run index followed by a purpose code).
    """
    if master_seed < 0 or master_seed >= 2**64:
        raise ValueError(f"master seed must fit in 64 unsigned bits, got {master_seed}")
    if any(p < 0 for p in path):
        raise ValueError(f"seed path entries must be nonnegative, got {path}")
    return np.random.SeedSequence(master_seed, spawn_key=tuple(path))


def make_rng(master_seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for ``path`` under ``master_seed``."""
    return np.random.default_rng(seed_sequence(master_seed, *path))


def child_seed(master_seed: int, *path: int) -> int:
    """Plain 64-bit integer seed derived for ``path`` under ``master_seed``.

    Used when a component (a benchmark run, a worker) needs its own master
    seed that it will split further with :func:`seed_sequence`.
    """
    state = seed_sequence(master_seed, *path).generate_state(1, np.uint64)
    return int(state[0])
