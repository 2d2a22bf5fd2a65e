"""Counter-based randomness for reproducible fault injection.

Every trial draws from its own stream so that results do not depend on how
trials are batched across chunks or worker threads.  The construction is the
SplitMix64 finalizer used in counter mode:

    mix64(z)        = xorshift/multiply finalizer of SplitMix64
    trial_key(s, t) = mix64(s + (t + 1) * GAMMA)          (wrapping uint64)
    draw(s, t, j)   = mix64(trial_key(s, t) + (j + 1) * GAMMA)

Draw j = 0 is reserved for input generation; gate i consumes draw j = i + 1.
A draw is one 64-bit word: bits 11..63 decide whether the operation faults
(compare against floor(g * 2**53)), bits 0..2 supply the replacement values.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return mix64((seed + (trial + 1) * GAMMA) & MASK64)


def draw(key: int, index: int) -> int:
    return mix64((key + (index + 1) * GAMMA) & MASK64)


def prob_to_threshold(p: float) -> int:
    """Map a probability to the integer fault threshold on 53-bit draws."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return min(int(round(p * (1 << 53))), 1 << 53)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized mix64 over a uint64 array."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def trial_keys_array(seed: int, start: int, stop: int) -> np.ndarray:
    t = np.arange(start + 1, stop + 1, dtype=np.uint64)
    return mix64_array(np.uint64(seed & MASK64) + t * np.uint64(GAMMA))


def draws_array(keys: np.ndarray, index: int) -> np.ndarray:
    return mix64_array(keys + np.uint64(((index + 1) * GAMMA) & MASK64))


class TrialStream:
    """Sequential view of one trial's draw sequence."""

    def __init__(self, seed: int, trial: int):
        self._key = trial_key(seed, trial)
        self._next = 0

    def next_u64(self) -> int:
        value = draw(self._key, self._next)
        self._next += 1
        return value

    def next_bits(self, n: int) -> tuple[int, ...]:
        word = self.next_u64()
        return tuple((word >> j) & 1 for j in range(n))
