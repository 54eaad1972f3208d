"""Seeded deterministic random streams.

A :class:`RandomStream` is a Mersenne Twister generator with a fixed 64-bit
seed. Child streams for parallel workers or independent trials are derived
with :meth:`RandomStream.spawn`, which mixes (seed, index) through the
SplitMix64 finalizer so that distinct indices give statistically independent
streams and the derivation is reproducible across runs.
"""

from __future__ import annotations

import random

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def derive_stream_seed(master_seed: int, index: int) -> int:
    """Seed of the index-th child stream of a stream seeded with master_seed."""
    return _splitmix64((master_seed + (index + 1) * _GOLDEN) & _MASK64)


class RandomStream(random.Random):
    """Uniform [0, 1) stream with a recorded seed.

    Two streams built with the same seed produce identical draw sequences.
    The inherited ``random()`` method is the primitive every sampler in this
    package consumes; draws never equal 1.0.
    """

    def __init__(self, seed: int):
        self.seed_value = int(seed) & _MASK64
        super().__init__(self.seed_value)

    def spawn(self, index: int) -> "RandomStream":
        """Derive the index-th child stream, deterministic in (seed, index)."""
        return RandomStream(derive_stream_seed(self.seed_value, index))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed_value})"
