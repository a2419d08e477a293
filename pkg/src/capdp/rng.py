"""Seeded pseudo-random numbers for instance generation.

All seeded generation in the package goes through SplitMix64 so that
instances are reproducible bit-for-bit across platforms and processes.
SplitMix64 is the 64-bit mixer from Steele, Lea & Flood's SplittableRandom:
the k-th output of a stream seeded with s is mix64(s + (k+1) * GAMMA), which
also makes batch generation a single vectorized expression.
"""

from __future__ import annotations

import numpy as np

_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator; one instance per seeded stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix64(self._state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (modulo reduction; documented)."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def randints(self, lo: int, hi: int, count: int) -> np.ndarray:
        """Vectorized batch equal to `count` successive randint() calls."""
        if hi < lo:
            raise ValueError("empty range")
        span = np.uint64(hi - lo + 1)
        start = np.uint64(self._state)
        ks = np.arange(1, count + 1, dtype=np.uint64)
        z = start + ks * np.uint64(_GAMMA)
        self._state = int(z[-1]) & _MASK if count else self._state
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        return (np.int64(lo) + (z % span).astype(np.int64)).astype(np.int64)

    def shuffle(self, xs: list) -> None:
        """Fisher-Yates shuffle driven by this stream."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.randint(0, i)
            xs[i], xs[j] = xs[j], xs[i]

    def choice(self, xs):
        return xs[self.randint(0, len(xs) - 1)]
