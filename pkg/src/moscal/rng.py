"""Deterministic 64-bit PRNG used for all instance generation and sampling.

The generator is SplitMix64 (Steele, Lea, Flood 2014).  It is specified
here bit-for-bit so that any language can reproduce the streams:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output: z XOR (z >> 31)

Derived quantities, in the order the helpers apply them:

* ``next_double``: ``(u64 >> 11) * 2^-53`` giving a double in [0, 1).
* ``randint(lo, hi)``: ``lo + (u64 mod (hi - lo + 1))`` (inclusive; the
  modulo bias is below 1e-17 for ranges used here and accepted for the
  sake of a one-line cross-language definition).
* ``exponential``: ``-log(1 - next_double())``, never evaluating log(0).
* ``shuffle``: Fisher-Yates from the last index down, partner drawn with
  ``randint(0, i)``.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Tiny, fast, reproducible 64-bit generator."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def exponential(self) -> float:
        return -math.log(1.0 - self.next_double())

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]


def fnv1a64(text: str) -> int:
    """FNV-1a hash of the UTF-8 bytes, used to derive per-cell seeds."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def derive_seed(master: int, key: str) -> int:
    """Stable per-cell seed: mix the master seed with a key string.

    Adding new cells to an experiment never perturbs existing cells
    because each seed depends only on (master, key).
    """
    mixer = SplitMix64((master & _MASK64) ^ fnv1a64(key))
    return mixer.next_u64()
