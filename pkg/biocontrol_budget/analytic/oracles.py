"""
Independent numerical oracles for the closed forms.
===================================================
  period_map           one reference period applied impulse by impulse (x ≡ 0)
  fixed_point_oracle   plain iteration of period_map to 1e-12
  quadrature_integral  adaptive quadrature of the periodic evaluator, impulse
                       instants passed as break points
"""

from __future__ import annotations

import math

from scipy.integrate import quad
from scipy.optimize import fixed_point

from ..errors import RegimeError
from ..model.params import ImpulseParams
from .periodic import PeriodicSolution

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200


def period_map(params: ImpulseParams, y):
    """Predator level right after the next coinciding impulse, starting from y right after one."""
    regime = params.regime
    k = regime.k
    release = params.release_amount
    survive = 1.0 - params.alpha_y
    if regime.kind == "harvest_multiple":
        decay = math.exp(-params.d * params.T_r)
        for i in range(1, k + 1):
            y = y * decay
            y = survive * y + release if i == k else y + release
        return y
    if regime.kind == "release_multiple":
        decay = math.exp(-params.d * params.T_h)
        for i in range(1, k + 1):
            y = survive * (y * decay)
        return y + release
    raise RegimeError("no period map for incommensurate periods")


def fixed_point_oracle(params: ImpulseParams, y0: float = 0.0) -> float:
    return float(fixed_point(lambda y: period_map(params, y), y0, xtol=1e-12, maxiter=100_000,
                             method="iteration"))


def quadrature_integral(params: ImpulseParams) -> float:
    solution = PeriodicSolution.from_params(params)
    points = solution.impulse_times() or None
    value, _ = quad(solution, 0.0, solution.period, points=points,
                    epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    return float(value)
