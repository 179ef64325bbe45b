"""Deterministic RNG substreams keyed by integer paths."""

from __future__ import annotations

import numpy as np

__all__ = ["child_seed", "rng_for", "resolve_seed"]


def child_seed(seed, *keys):
    """SeedSequence for the substream ``keys`` below ``seed``.

    ``child_seed(s, 3, 1)`` is independent of ``child_seed(s, 3, 2)`` and
    of ``child_seed(s, 4)``, and the same on every call.
    """
    keys = tuple(int(k) for k in keys)
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + keys)
    return np.random.SeedSequence(seed, spawn_key=keys)


def rng_for(seed, *keys):
    return np.random.default_rng(child_seed(seed, *keys))


def resolve_seed(seed):
    """Replace ``None`` with a fresh integer seed so the run can be replayed."""
    if seed is None:
        return int(np.random.SeedSequence().entropy % (1 << 63))
    return seed
