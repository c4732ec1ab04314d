"""Deterministic seed derivation.

All randomized pieces (generators, the randomized weak carving) receive their
entropy through `derive_seed`, keyed on structural identifiers (iteration
index, component min-id, attempt counter) rather than on execution order.
This keeps every run a pure function of (graph, eps, master seed) no matter
how components are scheduled.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 63) - 1


def derive_seed(seed: int, *parts: int) -> int:
    """Derive a child seed from a master seed and structural context ints."""
    entropy = [seed & _MASK] + [int(p) & _MASK for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def rng_from(seed: int, *parts: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *parts))
