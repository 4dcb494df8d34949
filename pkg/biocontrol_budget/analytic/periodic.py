"""
Pest-free periodic solution in closed form.
===========================================
With x ≡ 0 the predator obeys y' = -d·y between impulses, so one reference
period is an affine map of y and has a single attracting fixed point y*
(the level right after a coinciding harvest+release).

Releases at least as frequent (T_h = k·T_r):

    y* = [((1 - e^{-dT_h}) / (1 - e^{-dT_r}))(1 - a_y) + a_y] · mu·T_r / (1 - (1 - a_y) e^{-dT_h})
    y(t) = y* e^{-du} + mu·T_r e^{-d(u - i·T_r)} · sum_{j<i} e^{-j·d·T_r},   u = t mod T_h, i = floor(u / T_r)

Harvests more frequent (T_r = k·T_h):

    y* = mu·T_r / (1 - (1 - a_y)^k e^{-dT_r})
    y(t) = y* e^{-du} (1 - a_y)^{floor(u / T_h)},   u = t mod T_r

All evaluators are right-continuous: at an impulse instant they return the post value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import RegimeError
from ..model.params import ImpulseParams, Regime
from ..utils.numeric import decay_tail, geometric_sum, retention_gap, snap_floor, snap_mod


# ── Releases at least as frequent as harvests ──────────────────────

def ystar_h(params: ImpulseParams) -> float:
    params.harvest_k()
    d, a_y = params.d, params.alpha_y
    survive_ratio = math.expm1(-d * params.T_h) / math.expm1(-d * params.T_r)
    numerator = (survive_ratio * (1.0 - a_y) + a_y) * params.release_amount
    return numerator / retention_gap(a_y, d * params.T_h)


def _check_time(t: float) -> None:
    if t < 0 or not math.isfinite(t):
        raise ValueError(f"t must be finite and >= 0, got {t}")


def eval_y_ph(t: float, params: ImpulseParams, y_star: float | None = None) -> float:
    k = params.harvest_k()
    _check_time(t)
    y_star = ystar_h(params) if y_star is None else y_star
    d = params.d
    u = snap_mod(t, params.T_h)
    i = min(snap_floor(u, params.T_r), k - 1)
    tau = max(u - i * params.T_r, 0.0)
    releases = params.release_amount * math.exp(-d * tau) * geometric_sum(i, d * params.T_r)
    return y_star * math.exp(-d * u) + releases


def integral_y_ph(params: ImpulseParams) -> float:
    """Integral of y_ph over one harvest period."""
    k = params.harvest_k()
    d, T_h = params.d, params.T_h
    loss = harvest_loss_factor(params) * decay_tail(d * T_h, k)
    return params.mu * T_h / d * (1.0 - loss)


def harvest_loss_factor(params: ImpulseParams) -> float:
    """a_y (1 - e^{-dT_h}) / (1 - (1 - a_y) e^{-dT_h})."""
    d, T_h, a_y = params.d, params.T_h, params.alpha_y
    return a_y * -math.expm1(-d * T_h) / retention_gap(a_y, d * T_h)


# ── Harvests at least as frequent as releases ──────────────────────

def ystar_r(params: ImpulseParams) -> float:
    k = params.release_k()
    return params.release_amount / retention_gap(params.alpha_y, params.d * params.T_r, power=k)


def eval_y_pr(t: float, params: ImpulseParams, y_star: float | None = None) -> float:
    k = params.release_k()
    _check_time(t)
    y_star = ystar_r(params) if y_star is None else y_star
    u = snap_mod(t, params.T_r)
    harvests = min(snap_floor(u, params.T_h), k - 1)
    return y_star * math.exp(-params.d * u) * (1.0 - params.alpha_y) ** harvests


def integral_y_pr(params: ImpulseParams) -> float:
    """Integral of y_pr over one release period."""
    params.release_k()
    d, T_h = params.d, params.T_h
    return params.mu * params.T_r / d * -math.expm1(-d * T_h) / retention_gap(params.alpha_y, d * T_h)


# ── Regime-tagged solution ─────────────────────────────────────────

@dataclass(frozen=True)
class PeriodicSolution:
    regime: Regime
    y_star: float
    params: ImpulseParams

    @classmethod
    def from_params(cls, params: ImpulseParams) -> PeriodicSolution:
        regime = params.regime
        if regime.kind == "harvest_multiple":
            return cls(regime, ystar_h(params), params)
        if regime.kind == "release_multiple":
            return cls(regime, ystar_r(params), params)
        raise RegimeError("no periodic solution formula for incommensurate periods")

    @property
    def k(self) -> int:
        return self.regime.k

    @property
    def period(self) -> float:
        return self.params.T_h if self.regime.kind == "harvest_multiple" else self.params.T_r

    def __call__(self, t: float) -> float:
        if self.regime.kind == "harvest_multiple":
            return eval_y_ph(t, self.params, self.y_star)
        return eval_y_pr(t, self.params, self.y_star)

    def integral(self) -> float:
        if self.regime.kind == "harvest_multiple":
            return integral_y_ph(self.params)
        return integral_y_pr(self.params)

    def impulse_times(self) -> list[float]:
        """Impulse instants strictly inside one reference period."""
        step = self.params.T_r if self.regime.kind == "harvest_multiple" else self.params.T_h
        return [i * step for i in range(1, self.k)]


# ── Post-impulse recursion and per-interval integral ───────────────

def post_impulse_levels(params: ImpulseParams) -> list[float]:
    """y right after each impulse of the reference period, starting at y* (index 0)."""
    solution = PeriodicSolution.from_params(params)
    d, k = params.d, solution.k
    if solution.regime.kind == "harvest_multiple":
        z = d * params.T_r
        return [
            solution.y_star * math.exp(-i * z) + params.release_amount * geometric_sum(i, z)
            for i in range(k)
        ]
    z = d * params.T_h
    return [solution.y_star * math.exp(-i * z) * (1.0 - params.alpha_y) ** i for i in range(k)]


def integral_by_intervals(params: ImpulseParams) -> float:
    """Sum over the smooth pieces of the reference period of level_i·(1 - e^{-d·tau}) / d."""
    solution = PeriodicSolution.from_params(params)
    tau = params.T_r if solution.regime.kind == "harvest_multiple" else params.T_h
    piece = -math.expm1(-params.d * tau) / params.d
    return sum(level * piece for level in post_impulse_levels(params))


def contraction_factor(params: ImpulseParams) -> float:
    """Per-reference-period multiplier of the distance to y*."""
    solution = PeriodicSolution.from_params(params)
    if solution.regime.kind == "harvest_multiple":
        return (1.0 - params.alpha_y) * math.exp(-params.d * params.T_h)
    return (1.0 - params.alpha_y) ** solution.k * math.exp(-params.d * params.T_r)
