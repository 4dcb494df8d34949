"""
Budget versus release period.
=============================
budget_curve evaluates the minimal budget for a list of release-to-harvest
ratios T_r/T_h, each an integer k or a reciprocal 1/k. Ratios >= 1 (ratio 1
included) use the release-side formula, which does not depend on T_r, so the
curve is flat there. Ratios below 1 use the harvest-side formula.

monotonicity_check confirms that the harvest-side budget strictly increases
as releases become more frequent (k = T_h/T_r growing).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

import pandas as pd

from ..errors import RegimeError, ThresholdError
from ..model.hypotheses import derivatives_at_zero, estimate_sup_ratios
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel
from .budget import harvest_alone_suffices, mu_lower_h, mu_lower_r, sigma_slope_sign

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["ratio", "k", "regime", "mu_local", "mu_global", "trivial"]
DEFAULT_RATIOS = ("1/5", "1/4", "1/3", "1/2", "1", "2", "3", "4", "5")
DEFAULT_K_MAX = 50


def parse_ratio(value, k_max: int = DEFAULT_K_MAX) -> tuple[Fraction, int]:
    """Ratio as an exact fraction k or 1/k. Returns (ratio, k)."""
    try:
        ratio = Fraction(str(value)) if isinstance(value, str) else Fraction(value).limit_denominator(10**6)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise RegimeError(f"invalid ratio {value!r}") from exc
    if ratio <= 0:
        raise RegimeError(f"ratio must be positive, got {value!r}")
    if ratio.denominator == 1:
        k = ratio.numerator
    elif ratio.numerator == 1:
        k = ratio.denominator
    else:
        raise RegimeError(f"ratio {value!r} is neither an integer nor the reciprocal of one")
    if k > k_max:
        raise RegimeError(f"ratio {value!r} needs k={k} > k_max={k_max}")
    return ratio, k


def budget_curve(
    model: ResponseModel,
    base: ImpulseParams,
    ratios=DEFAULT_RATIOS,
    k_max: int = DEFAULT_K_MAX,
    grid_n: int = 400,
) -> pd.DataFrame:
    derivatives = derivatives_at_zero(model)
    sups = estimate_sup_ratios(model, grid_n, derivatives)

    rows = []
    for ratio, k in sorted((parse_ratio(v, k_max) for v in ratios), key=lambda item: item[0]):
        if ratio >= 1:
            params = replace(base, T_r=base.T_h * k)
            threshold = mu_lower_r
            regime = "harvest_multiple" if k == 1 else "release_multiple"
        else:
            params = replace(base, T_r=base.T_h / k)
            threshold = mu_lower_h
            regime = "harvest_multiple"
        local = threshold(sups.S_local, sups.r_local, params)
        global_ = threshold(sups.S, sups.r, params)
        rows.append({
            "ratio": float(ratio),
            "k": k,
            "regime": regime,
            "mu_local": local.value,
            "mu_global": global_.value,
            "trivial": local.trivial,
        })
    logger.info(f"[SWEEP] {len(rows)} ratios evaluated")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


@dataclass
class MonotonicityResult:
    holds: bool
    offending_k: int | None = None
    values: list[float] = field(default_factory=list)
    slope_signs_positive: bool = True
    plateau: float = 0.0
    exceeds_plateau: bool = True

    def __bool__(self) -> bool:
        return self.holds


def monotonicity_check(base: ImpulseParams, S: float, r: float, k_max: int = DEFAULT_K_MAX) -> MonotonicityResult:
    """mu_lower_h(k) strictly increasing for k = 1..k_max, and above the release-side plateau for k >= 2."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if harvest_alone_suffices(S, r, base):
        raise ThresholdError("monotonicity claim vacuous: harvesting alone is sufficient")

    values = [mu_lower_h(S, r, replace(base, T_r=base.T_h / k)).value for k in range(1, k_max + 1)]
    plateau = mu_lower_r(S, r, replace(base, T_r=base.T_h)).value

    offending = None
    for k in range(2, k_max + 1):
        if not values[k - 1] > values[k - 2]:
            offending = k
            break
    signs_positive = all(sigma_slope_sign(k, base.d, base.T_h) > 0 for k in range(1, k_max + 1))
    exceeds = all(v > plateau for v in values[1:])

    if offending is not None:
        logger.warning(f"[SWEEP] Budget not increasing at k={offending}")
    return MonotonicityResult(
        holds=offending is None and signs_positive,
        offending_k=offending,
        values=values,
        slope_signs_positive=signs_positive,
        plateau=plateau,
        exceeds_plateau=exceeds,
    )
