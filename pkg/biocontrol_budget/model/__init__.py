"""Model parameters, response families and the assumption checks."""

from .hypotheses import (
    DerivativesAtZero,
    HypothesisCheck,
    HypothesisReport,
    SupEstimates,
    derivatives_at_zero,
    estimate_sup_ratios,
    validate_hypotheses,
    working_grid,
)
from .params import ImpulseParams, Regime, detect_regime
from .responses import ResponseModel, from_expressions, logistic_holling, lotka_volterra

__all__ = [
    "DerivativesAtZero", "HypothesisCheck", "HypothesisReport", "SupEstimates",
    "derivatives_at_zero", "estimate_sup_ratios", "validate_hypotheses", "working_grid",
    "ImpulseParams", "Regime", "detect_regime",
    "ResponseModel", "from_expressions", "logistic_holling", "lotka_volterra",
]
