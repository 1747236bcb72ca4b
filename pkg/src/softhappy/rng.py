"""Deterministic random-stream derivation.

All stochastic code in this package draws from numpy Generators. Streams
are derived from a master seed plus an integer path, so a run is
reproducible regardless of scheduling or worker count: every consumer owns
a stream keyed by *what* it is (generation, offspring index, ...) rather
than by *when* it happens to run.
"""
from __future__ import annotations

import hashlib

import numpy as np

# Fixed stream tags, so unrelated consumers of the same master seed
# never collide.
STREAM_INIT = 1
STREAM_IMPROVE = 2
STREAM_OFFSPRING = 3
STREAM_RHO = 4
STREAM_BATCH = 5

RngLike = "int | np.random.Generator"


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, path)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(path)))


def as_generator(seed) -> np.random.Generator:
    """Accept either an integer seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def stable_hash64(*parts) -> int:
    """Stable 63-bit hash of strings/ints, for seeding from identifiers.

    Python's builtin hash() is salted per process; this one is not.
    """
    h = hashlib.sha256()
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big") & (2**63 - 1)


def uniform_open_closed(rng: np.random.Generator, size=None):
    """Uniform draw on (0, 1]: random() yields [0, 1), so mirror it."""
    return 1.0 - rng.random(size)
