"""
Empirical local threshold by simulation.
========================================
Seeds a tiny pest population on the pest-free periodic solution and simulates
the full nonlinear model for a number of reference periods. The pest is
declining when its level right after the last coinciding impulse is below the
level right after the first. Bisection on mu finds where that flips.
"""

from __future__ import annotations

import logging
from functools import lru_cache

from scipy.optimize import bisect

from ..analytic.periodic import PeriodicSolution
from ..errors import RegimeError, ThresholdError
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel
from ..sim.integrator import simulate
from ..sim.trace import reference_levels
from .budget import INCOMMENSURATE_MESSAGE

logger = logging.getLogger(__name__)

SEED_FRACTION = 1e-6
DEFAULT_PERIODS = 60
DEFAULT_ITERATIONS = 40
DT_FRACTION = 1e-2


def pest_declines(
    model: ResponseModel,
    params: ImpulseParams,
    periods: int = DEFAULT_PERIODS,
    dt: float | None = None,
    x_scale: float = 1.0,
) -> bool:
    solution = PeriodicSolution.from_params(params)
    dt = dt or DT_FRACTION * min(params.T_h, params.T_r)
    trace = simulate(model, params, x0=SEED_FRACTION * x_scale, y0=solution.y_star,
                     t_end=periods * solution.period, dt=dt, record_every=10**9)
    levels = reference_levels(trace)
    if len(levels) < 2:
        raise ThresholdError(f"need at least 2 coinciding impulses, got {len(levels)}")
    return levels[-1][1] < levels[0][1]


def empirical_threshold(
    model: ResponseModel,
    params: ImpulseParams,
    mu_bracket: tuple[float, float],
    iterations: int = DEFAULT_ITERATIONS,
    periods: int = DEFAULT_PERIODS,
    dt: float | None = None,
    x_scale: float = 1.0,
) -> float:
    """Smallest mu (to bisection accuracy) at which a seeded pest declines."""
    if not params.regime.commensurate:
        raise RegimeError(INCOMMENSURATE_MESSAGE)
    lo, hi = mu_bracket
    if not 0 <= lo < hi:
        raise ValueError(f"invalid bracket {mu_bracket}")

    @lru_cache(maxsize=None)
    def side(mu: float) -> float:
        declines = pest_declines(model, params.with_mu(mu), periods, dt, x_scale)
        return -1.0 if declines else 1.0

    if side(lo) == side(hi):
        state = "declines" if side(lo) < 0 else "persists"
        raise ThresholdError(f"no sign change in bracket [{lo}, {hi}]: pest {state} at both ends")

    mu = bisect(lambda m: side(float(m)), lo, hi, xtol=1e-15, maxiter=iterations, disp=False)
    logger.info(f"[BUDGET] Empirical threshold {mu:.6g} after {iterations} bisection steps")
    return float(mu)
