"""Deterministic, seedable pseudorandom generation.

The generator is SplitMix64 (Steele, Lea & Flood; the engine behind Java's
``SplittableRandom``): the state advances by the 64-bit golden-gamma constant
``0x9E3779B97F4A7C15`` and each output is the mixed state

    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

with all arithmetic mod 2**64.  Because the state sequence is an arithmetic
progression, whole blocks of outputs can be produced with vectorized uint64
array arithmetic; the batch path and the scalar path yield identical streams.

Uniform doubles take the top 53 bits: ``(u >> 11) * 2**-53`` in [0, 1).
Gaussians use the Marsaglia polar method over those uniforms.  Child streams
are derived from the parent's *seed* (not its position) by absorbing integer
key parts one at a time:

    h = seed;  h = mix64(((h ^ part) + 0x9E3779B97F4A7C15) mod 2**64)  per part

Each absorption step is bijective in the part, so distinct keys give distinct
child seeds and therefore streams that differ already at the first output.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_U64_GOLDEN = np.uint64(_GOLDEN)
_U64_MIX_A = np.uint64(_MIX_A)
_U64_MIX_B = np.uint64(_MIX_B)

# 2**-53, the spacing of the 53-bit uniform grid
_INV_2_53 = 1.0 / 9007199254740992.0


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX_A & _MASK
    z = (z ^ (z >> 27)) * _MIX_B & _MASK
    return z ^ (z >> 31)


def _mix64_batch(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps mod 2**64
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX_B
    return z ^ (z >> np.uint64(31))


def hash64(seed: int, *parts: int) -> int:
    """Mix integer key parts into a 64-bit child seed (see module docstring)."""
    h = seed & _MASK
    for p in parts:
        h = _mix64(((h ^ (int(p) & _MASK)) + _GOLDEN) & _MASK)
    return h


class Rng:
    """SplitMix64 stream with scalar and vectorized draws.

    A stream is single-owner mutable state; derive one child per worker via
    :meth:`child` for parallel use.  Children depend only on the parent's
    seed and the key parts, never on how much the parent has consumed.
    """

    __slots__ = ("_seed", "_state")

    def __init__(self, seed: int):
        self._seed = seed & _MASK
        self._state = self._seed

    @property
    def seed(self) -> int:
        return self._seed

    def child(self, *parts: int) -> "Rng":
        """Independent stream keyed by (seed, *parts)."""
        return Rng(hash64(self._seed, *parts))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix64(self._state)

    def u64(self, n: int) -> np.ndarray:
        """Next ``n`` raw outputs as a uint64 array."""
        idx = np.arange(1, n + 1, dtype=np.uint64)
        out = _mix64_batch(np.uint64(self._state) + idx * _U64_GOLDEN)
        self._state = (self._state + n * _GOLDEN) & _MASK
        return out

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        lim = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < lim:
                return u % n

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [0, 1), from the top 53 bits."""
        return (self.u64(n) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def uniform_symmetric(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [-1, 1)."""
        return 2.0 * self.uniform(n) - 1.0

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard Gaussians via the Marsaglia polar method.

        Pairs (u, v) uniform on [-1, 1) are accepted when 0 < u^2 + v^2 < 1;
        an accepted pair yields u*f and v*f with f = sqrt(-2 ln s / s), in
        that order.  Surplus Gaussians from the last batch are discarded, so
        the stream position depends only on the sizes requested.
        """
        out = np.empty(n, dtype=np.float64)
        have = 0
        while have < n:
            need = n - have
            npairs = (3 * need) // 4 + 8
            w = self.uniform_symmetric(2 * npairs)
            u = w[0::2]
            v = w[1::2]
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            f = np.sqrt(-2.0 * np.log(s) / s)
            g = np.empty(2 * u.size, dtype=np.float64)
            g[0::2] = u * f
            g[1::2] = v * f
            take = min(g.size, need)
            out[have:have + take] = g[:take]
            have += take
        return out
