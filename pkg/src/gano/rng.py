"""Deterministic, splittable random streams.

Every stream is a counter-based Philox generator keyed by a hash of
``(seed, path)``, so any (seed, stream index) pair reproduces the same
sequence on every platform, and disjoint paths give independent streams
that can be drawn in parallel.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np


def _philox_key(seed: int, path: tuple) -> np.ndarray:
    h = hashlib.blake2b(digest_size=16)
    h.update(repr((int(seed),) + tuple(path)).encode("utf-8"))
    return np.frombuffer(h.digest(), dtype=np.uint64).copy()


@dataclass(frozen=True)
class SeededRng:
    """Root of a tree of independent random streams."""

    seed: int
    path: tuple = field(default_factory=tuple)

    def child(self, *indices) -> "SeededRng":
        """A sub-tree rooted at this path extended by `indices`."""
        return SeededRng(self.seed, self.path + tuple(indices))

    def stream(self, *indices) -> np.random.Generator:
        """A fresh generator for the stream at `indices` under this path."""
        key = _philox_key(self.seed, self.path + tuple(indices))
        return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, *path) -> int:
    """A stable 64-bit integer seed derived from (seed, path)."""
    return int(_philox_key(seed, tuple(path))[0])
