"""Deterministic random source used by every stochastic component.

All draws go through an explicitly seeded PCG64 bit generator, never the
interpreter's global state, so a given seed reproduces the same draw
sequence across runs and platforms. Concurrent workers never share a
source; they derive independent children instead.
"""

from __future__ import annotations

import numpy as np


class RandomSource:
    """PCG64-backed generator exposing the draw primitives the toolkit uses."""

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int, _spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        ss = np.random.SeedSequence(self.seed, spawn_key=_spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, key: int) -> "RandomSource":
        """Independent stream derived from (seed, key); stable across runs."""
        return RandomSource(self.seed, _spawn_key=(int(key),))

    def random(self) -> float:
        return float(self._gen.random())

    def random_array(self, size: int) -> np.ndarray:
        return self._gen.random(size)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self._gen.integers(0, n))

    def randint_array(self, n: int, size: int) -> np.ndarray:
        return self._gen.integers(0, n, size=size)

    def shuffle(self, seq) -> None:
        self._gen.shuffle(seq)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def choice(self, seq):
        return seq[int(self._gen.integers(0, len(seq)))]

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"
