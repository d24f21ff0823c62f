"""Deterministic, splittable randomness.

Every sample owns an independent stream derived from the dataset's master
seed, so multi-process generation reproduces byte-exactly regardless of
scheduling. The generator is fully specified here and has no platform- or
library-version-dependent behavior:

state update (splitmix64):
    s[n+1] = (s[n] + 0x9E3779B97F4A7C15) mod 2**64
output mix:
    z = s[n+1]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB  mod 2**64
    out = z ^ (z >> 31)
doubles:
    (out >> 11) * 2**-53, uniform on [0, 1)
bounded integers:
    modulo rejection: draw until out < 2**64 - (2**64 mod n), return out mod n

Stream derivation is stateless:

    derive_sample_seed(master, i) = mix64((master + (i+1)*0x9E3779B97F4A7C15) mod 2**64)

i.e. the (i+1)-th raw output of a splitmix64 stream seeded at `master`.
The mix is a bijection on 64-bit values, so distinct indices under one
master seed can never collide.
"""

from __future__ import annotations

import math

from .errors import InfeasibleSamplingError, InvalidRangeError

_MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB

TWO_PI = 2.0 * math.pi


def mix64(value: int) -> int:
    """splitmix64 finalizer; a bijection on unsigned 64-bit integers."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_MULT_1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_MULT_2) & _MASK64
    return z ^ (z >> 31)


def derive_sample_seed(master_seed: int, sample_index: int) -> int:
    """Seed for the stream of sample `sample_index` under `master_seed`."""
    if not 0 <= master_seed <= _MASK64:
        raise ValueError("master_seed must fit in an unsigned 64-bit value")
    if not 0 <= sample_index <= _MASK64:
        raise ValueError("sample_index must fit in an unsigned 64-bit value")
    return mix64((master_seed + (sample_index + 1) * GOLDEN_GAMMA) & _MASK64)


class SampleRng:
    """Single-owner deterministic stream; never share one across threads."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & _MASK64
        return mix64(self._state)

    def uniform_real(self, a: float, b: float) -> float:
        """Uniform draw from the half-open interval [a, b)."""
        if not a < b:
            raise InvalidRangeError(f"need a < b, got a={a!r}, b={b!r}")
        u = (self.next_uint64() >> 11) * 2.0**-53
        x = a + (b - a) * u
        # (b-a)*u can round up to b-a when u is within an ulp of 1.
        if x >= b:
            x = math.nextafter(b, a)
        return x

    def uniform_int(self, n: int) -> int:
        """Unbiased uniform integer in [0, n)."""
        if n <= 0:
            raise InvalidRangeError(f"need n >= 1, got {n}")
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            r = self.next_uint64()
            if r < limit:
                return r % n

    def uniform_subset(self, lo: int, hi: int, k: int) -> list[int]:
        """k distinct integers from [lo, hi], uniform over subsets.

        Returned in draw order; callers assign meaning by position, so the
        order is part of the contract.
        """
        population = hi - lo + 1
        if k < 0 or k > population:
            raise InfeasibleSamplingError(
                f"cannot draw {k} distinct values from [{lo}, {hi}]"
            )
        pool = list(range(lo, hi + 1))
        for j in range(k):
            swap = j + self.uniform_int(population - j)
            pool[j], pool[swap] = pool[swap], pool[j]
        return pool[:k]

    def uniform_permutation3(self) -> tuple[int, int, int]:
        """One of the six permutations of (0, 1, 2), each with probability 1/6."""
        perm = [0, 1, 2]
        for j in range(2):
            swap = j + self.uniform_int(3 - j)
            perm[j], perm[swap] = perm[swap], perm[j]
        return perm[0], perm[1], perm[2]

    def coin(self) -> bool:
        """Fair coin."""
        return self.uniform_int(2) == 1

    def random_rotation(self) -> tuple[tuple[float, float, float], ...]:
        """Rotation matrix drawn uniformly from the 3-D rotation group.

        Uses the uniform-quaternion construction (three uniforms, branch
        free); the result is orthogonal with determinant +1.
        """
        from .geometry import rotation_from_quaternion

        u1 = self.uniform_real(0.0, 1.0)
        u2 = self.uniform_real(0.0, 1.0)
        u3 = self.uniform_real(0.0, 1.0)
        s1 = math.sqrt(1.0 - u1)
        s2 = math.sqrt(u1)
        x = s1 * math.sin(TWO_PI * u2)
        y = s1 * math.cos(TWO_PI * u2)
        z = s2 * math.sin(TWO_PI * u3)
        w = s2 * math.cos(TWO_PI * u3)
        return rotation_from_quaternion(w, x, y, z)
