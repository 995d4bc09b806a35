"""Deterministic pseudorandom generator used by every stochastic component.

The generator is xoshiro256++ (Blackman & Vigna), seeded by expanding a
single 64-bit seed through splitmix64 into the four state words.  The same
algorithm is implemented in the compiled stepping kernel, so a chain
advanced by either core consumes an identical draw stream.

Stream semantics (documented so golden runs stay reproducible):

* ``next_u64``       -- one raw 64-bit output per call.
* ``uniform``        -- one raw output; value ``(u >> 11) * 2**-53`` in [0, 1).
* ``uniform_index``  -- one raw output; value ``(u * m) >> 64`` in [0, m).
  The multiply-high reduction is biased by less than ``m * 2**-64``,
  negligible for any lattice this package can hold, and keeps the
  one-draw-per-selection accounting exact.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _splitmix64(x: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, output)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x, z ^ (z >> 31)


def seed_state(seed: int) -> tuple[int, int, int, int]:
    """Expand a 64-bit seed into the four xoshiro256++ state words."""
    x = seed & _MASK64
    words = []
    for _ in range(4):
        x, w = _splitmix64(x)
        words.append(w)
    if not any(words):  # all-zero state is the one fixed point; nudge it
        words[0] = 1
    return tuple(words)


class Xoshiro256pp:
    """xoshiro256++ with the draw semantics documented in the module docstring."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int = 0):
        self._s0, self._s1, self._s2, self._s3 = seed_state(seed)

    @classmethod
    def from_state(cls, words) -> "Xoshiro256pp":
        rng = cls.__new__(cls)
        s0, s1, s2, s3 = (int(w) & _MASK64 for w in words)
        rng._s0, rng._s1, rng._s2, rng._s3 = s0, s1, s2, s3
        return rng

    @property
    def state(self) -> tuple[int, int, int, int]:
        return (self._s0, self._s1, self._s2, self._s3)

    def state_array(self) -> np.ndarray:
        return np.array(self.state, dtype=np.uint64)

    def set_state_array(self, arr: np.ndarray) -> None:
        self._s0, self._s1, self._s2, self._s3 = (int(w) for w in arr)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        t = (s0 + s3) & _MASK64
        result = (((t << 23) | (t >> 41)) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        """Uniform real in [0, 1) with 53 significant bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform_index(self, m: int) -> int:
        """Uniform integer in [0, m)."""
        return (self.next_u64() * m) >> 64
