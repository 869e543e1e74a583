"""Deterministic derivation of independent random streams from one seed.

Every stream is named by (master_seed, *path) where path entries are small
integers; results therefore do not depend on thread scheduling or call
order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["spawn_rng"]


def spawn_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Independent generator for the stream named (master_seed, *path)."""
    entropy = (int(master_seed),) + tuple(int(p) for p in path)
    return np.random.default_rng(np.random.SeedSequence(entropy))
