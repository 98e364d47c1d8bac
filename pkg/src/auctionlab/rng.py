"""Deterministic 64-bit random streams.

The generator is splitmix64 (Steele, Lea & Flood's mixing function): the
state advances by the golden-ratio increment and each output is the
finalizer of the new state.  It is tiny, well studied, and trivially
reproducible on any platform, which makes golden-vector tests cheap.

Stream splitting derives child seeds from the *root* seed only, so
replication ``k`` sees the same stream no matter how many draws the
parent made or how many siblings exist.  ``child_seeds``/``child_uniforms``
are vectorized twins of the scalar path and produce bit-identical values
(covered by tests); they exist so Monte Carlo loops can run at numpy
speed without changing a single draw.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_SPLIT_SALT = 0xD1B54A32D192ED03


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class Rng:
    """splitmix64 stream seeded with a 64-bit integer."""

    __slots__ = ("_seed", "_state")

    def __init__(self, seed: int):
        self._seed = seed & _MASK
        self._state = seed & _MASK

    @property
    def seed(self) -> int:
        return self._seed

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive, via rejection sampling."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + r % span

    def split(self, k: int) -> "Rng":
        """Independent child stream for replication index ``k``.

        The child seed is ``mix64((seed XOR salt) + (k + 1) * gamma)``,
        a function of the root seed alone.
        """
        if k < 0:
            raise ValueError(f"replication index must be >= 0, got {k}")
        return Rng(_mix(((self._seed ^ _SPLIT_SALT) + (k + 1) * _GAMMA) & _MASK))


def child_seeds(seed: int, replications: int) -> np.ndarray:
    """Seeds of ``Rng(seed).split(k)`` for k in [0, replications), as uint64."""
    ks = np.arange(1, replications + 1, dtype=np.uint64)
    base = np.uint64((seed & _MASK) ^ _SPLIT_SALT)
    with np.errstate(over="ignore"):
        states = base + ks * np.uint64(_GAMMA)
    return _mix_vec(states)


def child_uniforms(seed: int, replications: int, draws: int) -> np.ndarray:
    """Matrix of the first ``draws`` uniforms of each child stream.

    Row ``k`` equals ``[Rng(seed).split(k).random() for _ in range(draws)]``
    bit for bit.
    """
    seeds = child_seeds(seed, replications)
    steps = np.arange(1, draws + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        states = seeds[:, None] + steps[None, :] * np.uint64(_GAMMA)
    return (_mix_vec(states) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _mix_vec(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))
