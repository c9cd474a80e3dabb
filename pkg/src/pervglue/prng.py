"""Deterministic 64-bit PRNG (splitmix-style mixing sequence).

The generator is specified algorithmically so that any implementation of
the same documents produces identical random corpora: state advances by the
golden-ratio increment and each output applies the standard two-round
xor-shift multiply finalizer.  Sampling helpers use rejection so streams
stay identical across platforms.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix:
    """Seeded deterministic stream of 64-bit words."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        lim = MASK64 + 1 - ((MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < lim:
                return x % n

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def substream(self, index: int) -> "SplitMix":
        """Independent stream for a shard; deterministic in (seed, index)."""
        return SplitMix(mix64(self.state ^ mix64(index + 1)))
