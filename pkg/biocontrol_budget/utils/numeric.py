"""
Numeric helpers for lattice arithmetic and decay factors.
"""

from __future__ import annotations

import math

# remainders within this fraction of the period snap to the next lattice point
LATTICE_SNAP = 1e-12
# below this exponent the geometric sum is replaced by its limit
SMALL_EXPONENT = 1e-12


def snap_floor(t: float, period: float) -> int:
    """floor(t / period), rounding up when t sits within LATTICE_SNAP·period of the next lattice point."""
    n = math.floor(t / period)
    if t - n * period >= period * (1.0 - LATTICE_SNAP):
        n += 1
    return n


def snap_mod(t: float, period: float) -> float:
    """t mod period, right-continuous at lattice points: values a hair below the period return 0."""
    n = snap_floor(t, period)
    return max(t - n * period, 0.0)


def geometric_sum(i: int, z: float) -> float:
    """sum_{j=0}^{i-1} e^{-j z} in closed form."""
    if i <= 0:
        return 0.0
    if z < SMALL_EXPONENT:
        return float(i)
    return math.expm1(-i * z) / math.expm1(-z)


def retention_gap(alpha: float, exponent: float, power: int = 1) -> float:
    """1 - (1-alpha)^power · e^{-exponent}, accurate when the product is close to 1."""
    if alpha >= 1.0:
        return 1.0
    return -math.expm1(power * math.log1p(-alpha) - exponent)


def decay_tail(z: float, k: int) -> float:
    """e^{-z/k} / (k (1 - e^{-z/k})): the per-release weight appearing in the harvest-side integral."""
    step = z / k
    return math.exp(-step) / (k * -math.expm1(-step))
