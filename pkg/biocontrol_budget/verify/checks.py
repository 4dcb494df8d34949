"""
Self-contained verification suite.
==================================
Each check compares a closed form against an independent oracle (quadrature,
plain iteration, simulation, Python's own expression grammar) on seeded random
draws and returns a CheckResult. A failing check never stops the suite.

Usage:
    results = run_all(model, np.random.default_rng(0))
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from ..analytic.oracles import fixed_point_oracle, period_map, quadrature_integral
from ..analytic.periodic import (
    PeriodicSolution,
    contraction_factor,
    integral_by_intervals,
    integral_y_ph,
    integral_y_pr,
    ystar_h,
    ystar_r,
)
from ..model.hypotheses import validate_hypotheses
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel, lotka_volterra
from ..sim.integrator import simulate
from ..sim.trace import reference_levels
from ..stability.budget import b11_from_rates, harvest_alone_suffices, mu_lower, mu_lower_h, mu_lower_r
from ..stability.sweep import budget_curve, monotonicity_check
from .parser_corpus import precedence_suite, round_trip_suite

logger = logging.getLogger(__name__)

Side = Literal["harvest", "release"]

# budget-figure parameters: alpha_x = alpha_y = 0.5, d = 1, T_h = 1
FIGURE_PARAMS = ImpulseParams(d=1.0, alpha_x=0.5, alpha_y=0.5, T_h=1.0, T_r=1.0, mu=0.5)
FIGURE_RATIOS = ("1/5", "1/4", "1/3", "1/2", "1", "2", "3", "4", "5")
FIGURE_ANCHOR = 0.396143
MAX_DRAW_ATTEMPTS = 100


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


# ── Random parameter draws ─────────────────────────────────────────

def draw_params(
    rng: np.random.Generator,
    side: Side,
    d_range: tuple[float, float] = (0.1, 3.0),
    T_h_range: tuple[float, float] = (0.2, 5.0),
    k_max: int = 5,
) -> ImpulseParams:
    """Random synchronized schedule: T_r = T_h/k (harvest side) or T_r = k·T_h (release side)."""
    d = float(rng.uniform(*d_range))
    T_h = float(rng.uniform(*T_h_range))
    k = int(rng.integers(1, k_max + 1))
    T_r = T_h / k if side == "harvest" else T_h * k
    return ImpulseParams(
        d=d,
        alpha_x=float(rng.uniform(0.0, 0.95)),
        alpha_y=float(rng.uniform(0.0, 0.95)),
        T_h=T_h,
        T_r=T_r,
        mu=float(rng.uniform(0.1, 5.0)),
    )


def draw_rates(rng: np.random.Generator, params: ImpulseParams) -> tuple[float, float]:
    """(f'(0), g'(0)) such that harvesting alone is not sufficient.

    Harvesting suffices iff f'(0) <= -ln(1 - alpha_x)/T_h, so f'(0) is drawn
    above that floor.
    """
    if params.alpha_x >= 1.0:
        raise ValueError("harvesting alone always suffices when alpha_x = 1")
    floor = -math.log1p(-params.alpha_x) / params.T_h
    for _ in range(MAX_DRAW_ATTEMPTS):
        fp0 = floor + float(rng.uniform(0.2, 3.0))
        gp0 = float(rng.uniform(0.2, 3.0))
        if not harvest_alone_suffices(fp0 / gp0, gp0, params):
            return fp0, gp0
    raise RuntimeError(f"no non-trivial rates after {MAX_DRAW_ATTEMPTS} draws for {params.to_dict()}")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ── Checks ─────────────────────────────────────────────────────────

def check_quadrature(rng: np.random.Generator, draws: int = 50) -> CheckResult:
    worst = 0.0
    for side in ("harvest", "release"):
        for _ in range(draws):
            params = draw_params(rng, side)
            closed = PeriodicSolution.from_params(params).integral()
            worst = max(worst, _rel(closed, quadrature_integral(params)),
                        _rel(closed, integral_by_intervals(params)))
    return CheckResult("closed-form integrals vs quadrature", worst < 1e-8,
                       f"{2 * draws} draws, max rel err {worst:.2e}")


def check_continuity(rng: np.random.Generator, draws: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        params = draw_params(rng, "harvest", k_max=1)
        fp0, gp0 = draw_rates(rng, params)
        S, r = fp0 / gp0, gp0
        worst = max(
            worst,
            _rel(ystar_h(params), ystar_r(params)),
            _rel(integral_y_ph(params), integral_y_pr(params)),
            _rel(mu_lower_h(S, r, params).value, mu_lower_r(S, r, params).value),
        )
    return CheckResult("continuity at T_r = T_h", worst < 1e-12, f"{draws} draws, max rel err {worst:.2e}")


def check_fixed_points(rng: np.random.Generator, draws: int = 20) -> CheckResult:
    worst_map = worst_iter = 0.0
    for side in ("harvest", "release"):
        for _ in range(draws):
            params = draw_params(rng, side)
            y_star = PeriodicSolution.from_params(params).y_star
            worst_map = max(worst_map, _rel(period_map(params, y_star), y_star))
            worst_iter = max(worst_iter, _rel(fixed_point_oracle(params), y_star))
    return CheckResult("y* is the fixed point of the period map", worst_map < 1e-12 and worst_iter < 1e-9,
                       f"map rel err {worst_map:.2e}, iteration rel err {worst_iter:.2e}")


def pest_free_convergence(params: ImpulseParams, y0: float, dt_fraction: float = 1e-3) -> tuple[float, float]:
    """(sup error over the last period, first contraction ratio) of a pest-free run."""
    solution = PeriodicSolution.from_params(params)
    T = solution.period
    periods = math.ceil(40.0 / (params.d * T))
    dt = dt_fraction * min(params.T_h, params.T_r)
    trace = simulate(lotka_volterra(1.0, 1.0, 1.0), params, x0=0.0, y0=y0, t_end=(periods + 1) * T, dt=dt)

    start = periods * T * (1 - 1e-12)
    sup_error = 0.0
    for t, y, event in zip(trace.t, trace.y, trace.events):
        if t >= start and not event.endswith("_pre"):
            sup_error = max(sup_error, abs(y - solution(float(t))))

    levels = [y0] + [level[2] for level in reference_levels(trace)]
    deviations = [abs(level - solution.y_star) for level in levels[:3]]
    ratio = deviations[1] / deviations[0] if deviations[0] > 0 else float("nan")
    return sup_error, ratio


def check_convergence(rng: np.random.Generator, draws: int = 1) -> CheckResult:
    worst_error = worst_ratio = 0.0
    for side in ("harvest", "release"):
        for _ in range(draws):
            params = draw_params(rng, side, d_range=(1.0, 3.0), T_h_range=(0.5, 2.0), k_max=3)
            solution = PeriodicSolution.from_params(params)
            expected = contraction_factor(params)
            for y0 in (0.0, solution.y_star / 2, 2 * solution.y_star):
                error, ratio = pest_free_convergence(params, y0, dt_fraction=2.5e-3)
                worst_error = max(worst_error, error)
                worst_ratio = max(worst_ratio, _rel(ratio, expected))
    return CheckResult("pest-free simulation converges to y_p", worst_error < 1e-6 and worst_ratio < 0.05,
                       f"sup err {worst_error:.2e}, contraction rel err {worst_ratio:.2e}")


def check_figure_shape() -> CheckResult:
    curve = budget_curve(lotka_volterra(1.0, 1.0, 1.0), FIGURE_PARAMS, FIGURE_RATIOS)
    above = curve[curve["ratio"] >= 1]["mu_local"].tolist()
    below = curve[curve["ratio"] < 1]["mu_local"].tolist()
    plateau = len(set(above)) == 1
    decreasing = all(a > b for a, b in zip(below, below[1:])) and below[-1] > above[0]
    continuity = _rel(mu_lower_h(1.0, 1.0, FIGURE_PARAMS).value, mu_lower_r(1.0, 1.0, FIGURE_PARAMS).value) < 1e-12
    anchor = abs(above[0] - FIGURE_ANCHOR) < 1e-5
    return CheckResult(
        "budget curve shape",
        plateau and decreasing and continuity and anchor,
        f"plateau={plateau} decreasing={decreasing} continuity={continuity} plateau value {above[0]:.6f}",
    )


def check_monotonicity(rng: np.random.Generator, draws: int = 20, k_max: int = 50) -> CheckResult:
    failures = []
    for i in range(draws):
        params = draw_params(rng, "harvest", k_max=1)
        fp0, gp0 = draw_rates(rng, params)
        result = monotonicity_check(params, fp0 / gp0, gp0, k_max)
        if not result:
            failures.append(f"draw {i}: k={result.offending_k}")
    return CheckResult("budget increases with release frequency", not failures,
                       f"{draws} draws, k=1..{k_max}" + (f", failures: {failures}" if failures else ""))


def check_threshold_equivalence(rng: np.random.Generator, draws: int = 20) -> CheckResult:
    worst = 0.0
    for side in ("harvest", "release"):
        for _ in range(draws):
            params = draw_params(rng, side)
            fp0, gp0 = draw_rates(rng, params)
            threshold = mu_lower(fp0 / gp0, gp0, params)
            worst = max(worst, abs(b11_from_rates(fp0, gp0, params.with_mu(threshold.value)) - 1.0))
    return CheckResult("|B11| = 1 at the local threshold", worst < 1e-9, f"max |B11 - 1| {worst:.2e}")


def check_parser(rng: np.random.Generator) -> CheckResult:
    round_trip = round_trip_suite()
    precedence = precedence_suite(rng)
    failures = round_trip.failures + precedence.failures
    detail = f"{round_trip.count} round trips, {precedence.count} precedence draws"
    if failures:
        detail += f", first failure {failures[0]}"
    return CheckResult("expression parser", round_trip.passed and precedence.passed, detail)


def check_model(model: ResponseModel, grid_n: int) -> CheckResult:
    report = validate_hypotheses(model, grid_n)
    failed = ", ".join(f"{c.name} at x={c.witness}" for c in report.failures)
    return CheckResult("configured model satisfies the hypotheses", report.passed,
                       failed or f"{len(report.checks)} checks passed")


# ── Runner ─────────────────────────────────────────────────────────

def run_all(model: ResponseModel, rng: np.random.Generator, grid_n: int = 400) -> list[CheckResult]:
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("quadrature", lambda: check_quadrature(rng)),
        ("continuity", lambda: check_continuity(rng)),
        ("fixed points", lambda: check_fixed_points(rng)),
        ("convergence", lambda: check_convergence(rng)),
        ("figure shape", check_figure_shape),
        ("monotonicity", lambda: check_monotonicity(rng)),
        ("threshold", lambda: check_threshold_equivalence(rng)),
        ("parser", lambda: check_parser(rng)),
        ("model", lambda: check_model(model, grid_n)),
    ]
    results = []
    for label, run in checks:
        try:
            results.append(run())
        except Exception as exc:
            logger.exception(f"[VERIFY] {label} check crashed")
            results.append(CheckResult(label, False, f"{type(exc).__name__}: {exc}"))
    return results
