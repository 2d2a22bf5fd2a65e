"""Closed-form calculators: thresholds, concatenation, blowup, entropy.

Thresholds and integer blowups are exact (fractions / ints); logs, ratios,
and entropy use floats.  Entropy is measured in bits (logs base 2); the
Landauer conversion to joules inserts the ln 2 explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

K_BOLTZMANN = 1.380649e-23  # J/K

# Entropy constant 2*sqrt(7/8) + (7/8)*log2(7) from the single-gate bound.
KAPPA = 2.0 * math.sqrt(7.0 / 8.0) + (7.0 / 8.0) * math.log2(7.0)


@dataclass(frozen=True)
class AnalysisParams:
    """Bundle of calculator inputs; checks the G = 3 + E relation when both given."""

    G: int | None = None
    E: int | None = None
    G_tilde: float | None = None
    g: float | None = None
    T: int | None = None
    L: int | None = None
    rho: float | None = None
    rho1: float | None = None
    rho2: float | None = None

    def __post_init__(self):
        if self.G is not None and self.E is not None and self.G != 3 + self.E:
            raise ValueError(f"inconsistent operation counts: G={self.G}, E={self.E}")
        if self.g is not None and not 0.0 <= self.g <= 1.0:
            raise ValueError(f"g out of range: {self.g}")
        if self.T is not None and self.T < 1:
            raise ValueError("T must be at least 1")
        if self.L is not None and self.L < 0:
            raise ValueError("L must be non-negative")


def threshold(g_ops: int) -> Fraction:
    """Exact error threshold 1 / (3 * C(G, 2)) for G counted operations."""
    if g_ops < 2:
        raise ValueError("operation count must be at least 2")
    return Fraction(1, 3 * (g_ops * (g_ops - 1) // 2))


def logical_error_bound(g: float, rho: float, k: int) -> float:
    """Error bound after k concatenation levels: rho * (g / rho) ** (2**k)."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if g < 0:
        raise ValueError("g must be non-negative")
    if k < 0:
        raise ValueError("k must be non-negative")
    return rho * (g / rho) ** (2 ** k)


def min_concat_level(T: float, g: float, rho: float) -> int:
    """Smallest L with rho * (g / rho) ** (2**L) <= 1 / T.

    Computed from the closed form L >= log2(log(T rho) / log(rho / g)) and
    then verified against the direct bound, nudging the ceiling if rounding
    over- or undershoots.  The comparison allows one part in 10**9 of slack
    so that exact boundary cases (bound equal to 1/T in real arithmetic) are
    not pushed a level up by float rounding.
    """
    if T < 1:
        raise ValueError("module size T must be at least 1")
    if g >= rho:
        raise ValueError(f"g = {g} is not below threshold rho = {rho}: no finite level")
    if g <= 0:
        return 0
    target = (1.0 / T) * (1.0 + 1e-9)
    log_ratio = math.log(rho / g)
    log_t_rho = math.log(T * rho)
    if log_t_rho <= 0:
        level = 0
    else:
        level = max(0, math.ceil(math.log2(log_t_rho / log_ratio)))
    while logical_error_bound(g, rho, level) > target:
        level += 1
    while level > 0 and logical_error_bound(g, rho, level - 1) <= target:
        level -= 1
    return level


@dataclass(frozen=True)
class Blowup:
    gate_factor: int
    bit_factor: int
    gate_exponent: float
    bit_exponent: float


def blowup(g_ops: int, level: int) -> Blowup:
    """Gate and bit multipliers at a concatenation depth, with poly-log exponents."""
    if g_ops < 3:
        raise ValueError("operation count must be at least 3")
    if level < 0:
        raise ValueError("level must be non-negative")
    return Blowup(
        (3 * (g_ops - 2)) ** level,
        9 ** level,
        math.log2(3 * (g_ops - 2)),
        math.log2(9),
    )


@dataclass(frozen=True)
class MixedThreshold:
    value: float
    ratio: float  # value / rho2


def mixed_threshold(k: int, rho1: float, rho2: float) -> MixedThreshold:
    """Effective threshold of k 2D levels under 1D levels: rho2*(rho1/rho2)**(1/2**k)."""
    if not 0 < rho1 <= rho2:
        raise ValueError("need 0 < rho1 <= rho2")
    if k < 0:
        raise ValueError("k must be non-negative")
    ratio = (rho1 / rho2) ** (1.0 / 2 ** k)
    return MixedThreshold(rho2 * ratio, ratio)


TABLE2_RHO1 = Fraction(1, 2109)
TABLE2_RHO2 = Fraction(1, 273)


def table2_ratios(max_k: int = 5) -> list[float]:
    """Mixed-threshold ratios for k = 0..max_k at the 1D/2D threshold pair."""
    return [
        mixed_threshold(k, float(TABLE2_RHO1), float(TABLE2_RHO2)).ratio
        for k in range(max_k + 1)
    ]


@dataclass(frozen=True)
class EntropyReport:
    upper_bound_bits: float
    lower_bound_bits: float
    max_useful_level: float
    landauer_joules: float | None = None


def max_useful_level(g: float, recovery_ops: int) -> float:
    """Deepest level keeping O(1) bits of entropy per gate: log(1/g)/log(3E) + 1."""
    if not 0.0 < g < 1.0:
        raise ValueError("g must be in (0, 1)")
    if recovery_ops < 1:
        raise ValueError("recovery operation count must be at least 1")
    return math.log(1.0 / g) / math.log(3.0 * recovery_ops) + 1.0


def entropy_bounds(
    g_tilde: float,
    recovery_ops: int,
    level: int,
    g: float,
    temperature_kelvin: float | None = None,
) -> EntropyReport:
    """Entropy per level-L gate in bits: (3E)**(L-1) * g <= H_L <= G~**L * kappa * sqrt(g).

    When a temperature is supplied, the upper bound is converted to a minimum
    heat in joules via the Landauer relation.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    if not 0.0 < g <= 1.0:
        raise ValueError("g must be in (0, 1]")
    upper = g_tilde ** level * KAPPA * math.sqrt(g)
    lower = (3.0 * recovery_ops) ** (level - 1) * g
    joules = None
    if temperature_kelvin is not None:
        joules = landauer_energy(upper, temperature_kelvin)
    return EntropyReport(upper, lower, max_useful_level(g, recovery_ops), joules)


def landauer_energy(delta_h_bits: float, temperature_kelvin: float) -> float:
    """Minimum heat for erasing delta_h bits: k_B * T * ln2 * delta_h."""
    if delta_h_bits < 0 or temperature_kelvin < 0:
        raise ValueError("entropy and temperature must be non-negative")
    return K_BOLTZMANN * temperature_kelvin * math.log(2.0) * delta_h_bits
