"""Deterministic randomness plumbing.

All stochastic steps draw from counter-based Philox streams derived from one
root seed plus a stable string/int path, so per-tree and per-fold streams are
fixed before any work is scheduled and results do not depend on thread count
or execution order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _path_key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    digest = hashlib.blake2s(str(part).encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "big")


def seed_sequence(root_seed: int, *path) -> np.random.SeedSequence:
    """SeedSequence for ``root_seed`` refined by a stable derivation path."""
    return np.random.SeedSequence(
        entropy=int(root_seed) & (2**64 - 1),
        spawn_key=tuple(_path_key(p) for p in path),
    )


def generator(root_seed: int, *path) -> np.random.Generator:
    """Philox generator for the stream named by ``path``."""
    return np.random.Generator(np.random.Philox(seed_sequence(root_seed, *path)))


def child_seed(root_seed: int, *path) -> int:
    """A 64-bit seed derived from ``root_seed`` and ``path``."""
    return int(seed_sequence(root_seed, *path).generate_state(1, np.uint64)[0])
