"""Closed-form pest-free periodic solutions and their oracles."""

from .oracles import fixed_point_oracle, period_map, quadrature_integral
from .periodic import (
    PeriodicSolution,
    contraction_factor,
    eval_y_ph,
    eval_y_pr,
    harvest_loss_factor,
    integral_by_intervals,
    integral_y_ph,
    integral_y_pr,
    post_impulse_levels,
    ystar_h,
    ystar_r,
)

__all__ = [
    "fixed_point_oracle", "period_map", "quadrature_integral",
    "PeriodicSolution", "contraction_factor", "eval_y_ph", "eval_y_pr", "harvest_loss_factor",
    "integral_by_intervals", "integral_y_ph", "integral_y_pr", "post_impulse_levels",
    "ystar_h", "ystar_r",
]
