"""Deterministic stream derivation for Monte Carlo replicates.

Replicate r of an experiment with master seed s always draws from
``stream(s, r)``, so results are identical no matter how replicates are
batched or distributed across workers.
"""

from __future__ import annotations

import numpy as np


def stream(seed, *key) -> np.random.Generator:
    """Generator keyed by (seed, *key); same key, same stream."""
    entropy = (int(seed),) + tuple(int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(entropy))
