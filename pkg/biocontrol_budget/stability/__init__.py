"""Minimal-budget thresholds, classification and the budget curve."""

from .budget import (
    StabilityReport,
    Threshold,
    b11,
    b11_from_rates,
    classify,
    harvest_alone_suffices,
    integral_margin,
    monodromy_diagonal,
    mu_lower,
    mu_lower_h,
    mu_lower_r,
    sigma,
    sigma_slope_sign,
    stability_margin,
)
from .empirical import empirical_threshold, pest_declines
from .sweep import MonotonicityResult, budget_curve, monotonicity_check, parse_ratio

__all__ = [
    "StabilityReport", "Threshold", "b11", "b11_from_rates", "classify", "harvest_alone_suffices",
    "integral_margin", "monodromy_diagonal", "mu_lower", "mu_lower_h", "mu_lower_r", "sigma",
    "sigma_slope_sign", "stability_margin",
    "empirical_threshold", "pest_declines",
    "MonotonicityResult", "budget_curve", "monotonicity_check", "parse_ratio",
]
