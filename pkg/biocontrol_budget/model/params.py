"""
Impulse schedule parameters and regime detection.
=================================================
A schedule is synchronized when one period is an integer multiple of the other:

  harvest_multiple(k)   T_h = k·T_r   (releases at least as frequent, k = 1 included)
  release_multiple(k)   T_r = k·T_h   (k >= 2)
  incommensurate        neither; simulation only
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

from ..errors import RegimeError

RegimeKind = Literal["harvest_multiple", "release_multiple", "incommensurate"]

RATIO_TOLERANCE = 1e-9
MAX_MULTIPLE = 10**6


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    k: int | None = None

    @property
    def commensurate(self) -> bool:
        return self.kind != "incommensurate"

    def __str__(self) -> str:
        return self.kind if self.k is None else f"{self.kind}({self.k})"


def _integer_ratio(numerator: float, denominator: float) -> int | None:
    ratio = numerator / denominator
    n = round(ratio)
    if 1 <= n <= MAX_MULTIPLE and abs(ratio - n) <= RATIO_TOLERANCE:
        return int(n)
    return None


def detect_regime(T_h: float, T_r: float) -> Regime:
    k = _integer_ratio(T_h, T_r)
    if k is not None:
        return Regime("harvest_multiple", k)
    k = _integer_ratio(T_r, T_h)
    if k is not None and k >= 2:
        return Regime("release_multiple", k)
    return Regime("incommensurate")


@dataclass(frozen=True)
class ImpulseParams:
    """Scalar parameters of the impulsive model.

    d        predator mortality rate (1/time)
    alpha_x  fraction of pests removed at each harvest
    alpha_y  fraction of predators removed at each harvest
    T_h      harvest period
    T_r      release period
    mu       release budget rate; each release adds mu·T_r predators
    """

    d: float
    alpha_x: float
    alpha_y: float
    T_h: float
    T_r: float
    mu: float

    def __post_init__(self):
        for name in ("d", "alpha_x", "alpha_y", "T_h", "T_r", "mu"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        if self.d <= 0:
            raise ValueError(f"d must be > 0, got {self.d}")
        if self.T_h <= 0:
            raise ValueError(f"T_h must be > 0, got {self.T_h}")
        if self.T_r <= 0:
            raise ValueError(f"T_r must be > 0, got {self.T_r}")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        for name in ("alpha_x", "alpha_y"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @property
    def regime(self) -> Regime:
        return detect_regime(self.T_h, self.T_r)

    @property
    def release_amount(self) -> float:
        return self.mu * self.T_r

    @property
    def reference_period(self) -> float:
        """Period of the pest-free solution: max(T_h, T_r) for synchronized schedules."""
        regime = self.regime
        if regime.kind == "harvest_multiple":
            return self.T_h
        if regime.kind == "release_multiple":
            return self.T_r
        raise RegimeError("incommensurate periods have no common reference period")

    def harvest_k(self) -> int:
        """k with T_h = k·T_r. Raises RegimeError when T_h is not a multiple of T_r."""
        k = _integer_ratio(self.T_h, self.T_r)
        if k is None:
            raise RegimeError(
                f"T_h={self.T_h} is not an integer multiple of T_r={self.T_r} (harvest-multiple formula)"
            )
        return k

    def release_k(self) -> int:
        """k with T_r = k·T_h, k = 1 accepted. Raises RegimeError otherwise."""
        k = _integer_ratio(self.T_r, self.T_h)
        if k is None:
            raise RegimeError(
                f"T_r={self.T_r} is not an integer multiple of T_h={self.T_h} (release-multiple formula)"
            )
        return k

    def with_mu(self, mu: float) -> ImpulseParams:
        return replace(self, mu=mu)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "alpha_x": self.alpha_x,
            "alpha_y": self.alpha_y,
            "T_h": self.T_h,
            "T_r": self.T_r,
            "mu": self.mu,
        }
