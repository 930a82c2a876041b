"""Portable seeded random stream.

Bits come from numpy's PCG64 bit generator (``random_raw``), whose output
stream is fixed for a given seed across platforms and numpy versions. The
sampling on top of the raw 64-bit words is done here so it is frozen too:

* ``integer(lo, hi)``: let r = hi - lo + 1 and limit = 2**64 - (2**64 mod r).
  Draw words u until u < limit, return lo + u mod r.
* ``uniform(lo, hi)``: u >> 11 gives 53 random bits; x = lo + (hi - lo) * bits / 2**53.
"""
from __future__ import annotations

import numpy as np

_TWO64 = 1 << 64


class SeededStream:
    def __init__(self, seed: int):
        self._bits = np.random.PCG64(int(seed))

    def raw(self) -> int:
        return int(self._bits.random_raw())

    def integer(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError("empty integer range")
        r = hi - lo + 1
        limit = _TWO64 - (_TWO64 % r)
        while True:
            u = self.raw()
            if u < limit:
                return lo + u % r

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * ((self.raw() >> 11) / 9007199254740992.0)
