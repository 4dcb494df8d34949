"""
Tests for the minimal release budget, classification and the budget sweep.
==========================================================================
Anchors use the budget-figure parameters: alpha_x = alpha_y = 0.5, d = 1,
T_h = 1, Lotka–Volterra responses with unit coefficients (S = r = 1).

Run: python -m pytest biocontrol_budget/tests/test_stability.py -v
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq

from biocontrol_budget.analytic import PeriodicSolution
from biocontrol_budget.errors import RegimeError, ThresholdError
from biocontrol_budget.model import ImpulseParams, from_expressions, logistic_holling, lotka_volterra
from biocontrol_budget.sim import detect_extinction, simulate
from biocontrol_budget.stability import (
    b11,
    b11_from_rates,
    budget_curve,
    classify,
    empirical_threshold,
    harvest_alone_suffices,
    integral_margin,
    monodromy_diagonal,
    monotonicity_check,
    mu_lower,
    mu_lower_h,
    mu_lower_r,
    parse_ratio,
    sigma,
    sigma_slope_sign,
)
from biocontrol_budget.verify.checks import draw_params, draw_rates

LV = lotka_volterra(1.0, 1.0, 1.0)
PLATEAU = 0.396143


def _params(**overrides) -> ImpulseParams:
    values = dict(d=1.0, alpha_x=0.5, alpha_y=0.5, T_h=1.0, T_r=1.0, mu=0.5)
    values.update(overrides)
    return ImpulseParams(**values)


# ── sigma ────────────────────────────────────────────────────────

def test_sigma_at_one():
    assert sigma(1, 1.0, 1.0) == pytest.approx(math.exp(-1.0) / (1.0 - math.exp(-1.0)), rel=1e-12)
    assert sigma(1, 1.0, 1.0) == pytest.approx(0.5819767, abs=1e-7)


def test_sigma_increases_with_k():
    values = [sigma(k, 1.0, 1.0) for k in range(1, 51)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert all(sigma_slope_sign(k, 1.0, 1.0) > 0 for k in range(1, 51))


def test_sigma_diverges_for_tiny_decay():
    with pytest.raises(ThresholdError):
        sigma(1, 1e-13, 1.0)


def test_sigma_rejects_k_zero():
    with pytest.raises(ValueError):
        sigma(0, 1.0, 1.0)


# ── Harvest-side threshold ───────────────────────────────────────

def test_mu_lower_h_figure_anchor():
    threshold = mu_lower_h(1.0, 1.0, _params())
    assert threshold.value == pytest.approx(PLATEAU, abs=2e-6)
    assert not threshold.trivial
    assert float(threshold) == threshold.value


def test_mu_lower_h_more_frequent_releases_cost_more():
    assert mu_lower_h(1.0, 1.0, _params(T_r=0.5)).value == pytest.approx(0.43743, abs=1e-5)
    assert mu_lower_h(1.0, 1.0, _params(T_r=1.0 / 3.0)).value == pytest.approx(0.45549, abs=1e-4)


def test_mu_lower_h_matches_unit_b11_root():
    for T_r in (1.0, 0.5, 1.0 / 3.0):
        params = _params(T_r=T_r)
        root = brentq(lambda mu: b11_from_rates(1.0, 1.0, params.with_mu(mu)) - 1.0, 0.05, 2.0, xtol=1e-14)
        assert mu_lower_h(1.0, 1.0, params).value == pytest.approx(root, abs=1e-9)


def test_trivial_at_boundary():
    params = _params(alpha_x=1.0 - math.exp(-1.0))
    threshold = mu_lower_h(1.0, 1.0, params)
    assert threshold.trivial
    assert threshold.value == 0.0


def test_trivial_when_harvest_removes_all_pests():
    threshold = mu_lower_h(1.0, 1.0, _params(alpha_x=1.0))
    assert threshold.trivial
    assert threshold.value == 0.0
    assert "alpha_x" in threshold.reason


def test_harvest_alone_suffices():
    assert harvest_alone_suffices(1.0, 1.0, _params(alpha_x=0.9))
    assert not harvest_alone_suffices(1.0, 1.0, _params())


def test_non_positive_rate_rejected():
    with pytest.raises(ValueError):
        mu_lower_h(1.0, 0.0, _params())


def test_wrong_side_raises_regime_error():
    with pytest.raises(RegimeError):
        mu_lower_h(1.0, 1.0, _params(T_r=2.0))
    with pytest.raises(RegimeError):
        mu_lower_r(1.0, 1.0, _params(T_r=0.5))


def test_incommensurate_dispatch_refused():
    with pytest.raises(RegimeError, match="simulate instead"):
        mu_lower(1.0, 1.0, _params(T_r=math.sqrt(2.0)))


# ── Release-side threshold ───────────────────────────────────────

def test_mu_lower_r_flat_in_release_period():
    values = [mu_lower_r(1.0, 1.0, _params(T_r=float(k))).value for k in (1, 2, 5)]
    assert values[0] == values[1] == values[2]
    assert values[0] == pytest.approx(PLATEAU, abs=2e-6)


def test_mu_lower_r_without_predator_harvest():
    params = _params(alpha_y=0.0, T_r=3.0)
    assert mu_lower_r(1.0, 1.0, params).value == pytest.approx(1.0 + math.log(0.5), rel=1e-12)


def test_sides_agree_at_equal_periods():
    rng = np.random.default_rng(6)
    for _ in range(100):
        params = draw_params(rng, "harvest", k_max=1)
        fp0, gp0 = draw_rates(rng, params)
        h = mu_lower_h(fp0 / gp0, gp0, params).value
        r = mu_lower_r(fp0 / gp0, gp0, params).value
        assert h == pytest.approx(r, rel=1e-12)


@pytest.mark.parametrize("side", ["harvest", "release"])
def test_threshold_is_unit_b11(side):
    rng = np.random.default_rng(7)
    for _ in range(20):
        params = draw_params(rng, side)
        fp0, gp0 = draw_rates(rng, params)
        threshold = mu_lower(fp0 / gp0, gp0, params)
        assert b11_from_rates(fp0, gp0, params.with_mu(threshold.value)) == pytest.approx(1.0, abs=1e-9)


# ── Monodromy entries and integral margin ────────────────────────

def test_b11_at_threshold_is_one():
    params = _params().with_mu(mu_lower_h(1.0, 1.0, _params()).value)
    assert b11(LV, params) == pytest.approx(1.0, abs=1e-9)


def test_b11_without_control():
    assert b11(LV, _params(alpha_x=0.0, mu=0.0)) == pytest.approx(math.e, rel=1e-9)


def test_b11_large_budget():
    assert b11(LV, _params(mu=100.0)) < 1e-10


def test_b22_is_pest_free_contraction():
    _, b22 = monodromy_diagonal(1.0, 1.0, _params())
    assert b22 == pytest.approx(0.5 * math.exp(-1.0), rel=1e-12)
    _, b22 = monodromy_diagonal(1.0, 1.0, _params(T_r=2.0))
    assert b22 == pytest.approx(0.25 * math.exp(-2.0), rel=1e-12)


def test_integral_margin_sign_follows_threshold():
    threshold = mu_lower_h(1.0, 1.0, _params(T_r=0.5)).value
    assert integral_margin(1.0, 1.0, _params(T_r=0.5, mu=1.01 * threshold)) > 0
    assert integral_margin(1.0, 1.0, _params(T_r=0.5, mu=0.99 * threshold)) < 0
    assert integral_margin(1.0, 1.0, _params(T_r=0.5, mu=threshold)) == pytest.approx(0.0, abs=1e-12)


# ── Classification ───────────────────────────────────────────────

def test_classify_globally_stable():
    report = classify(LV, _params(mu=0.5))
    assert report.classification == "GloballyStable"
    assert report.mu_lower_local == pytest.approx(PLATEAU, abs=2e-6)
    assert report.mu_lower_global == pytest.approx(report.mu_lower_local, rel=1e-9)
    assert report.b11 < 1.0


def test_classify_unstable():
    report = classify(LV, _params(mu=0.3))
    assert report.classification == "Unstable"
    assert not report.boundary
    assert report.b11 > 1.0


def test_classify_boundary_is_unstable():
    threshold = classify(LV, _params()).mu_lower_local
    report = classify(LV, _params(mu=threshold))
    assert report.classification == "Unstable"
    assert report.boundary


def test_classify_logistic_growth_equals_linear_budget():
    report = classify(from_expressions("x*(1 - x/10)", "x", "x"), _params(mu=0.5))
    assert report.classification == "GloballyStable"
    assert report.S_global == pytest.approx(1.0, abs=1e-9)


def test_classify_locally_stable_only():
    model = logistic_holling(a=1.0, K=10.0, c=1.0, tau=0.5, gamma=1.0)
    report = classify(model, _params(mu=0.8))
    assert report.classification == "LocallyStableOnly"
    assert report.S_global == pytest.approx(1.8, abs=1e-6)
    assert report.mu_lower_global > 0.8 > report.mu_lower_local


def test_classify_flags_sup_beyond_x_max():
    # f/g keeps rising up to x ~ 5000; x_max defaults to 1000
    model = logistic_holling(a=1.0, K=1e4, c=1.0, tau=0.5, gamma=1.0)
    report = classify(model, _params(mu=0.5))
    assert report.sup_not_reached == ("f/g",)
    assert report.S_global == pytest.approx(0.9 * 501.0, rel=1e-9)
    assert report.classification == "LocallyStableOnly"


def test_classify_trivially_stable():
    report = classify(LV, _params(alpha_x=0.9, mu=0.0))
    assert report.classification == "TriviallyStable"
    assert report.trivial_reason


def test_classify_incommensurate_refused():
    with pytest.raises(RegimeError, match="no stability formula for incommensurate periods"):
        classify(LV, _params(T_r=math.sqrt(2.0)))


def test_report_serializes():
    payload = classify(LV, _params()).to_dict()
    assert payload["regime"] == "harvest_multiple"
    assert payload["k"] == 1
    assert payload["classification"] == "GloballyStable"


# ── Sweep and monotonicity ───────────────────────────────────────

def test_parse_ratio():
    assert parse_ratio("1/3") == (Fraction(1, 3), 3)
    assert parse_ratio(2)[1] == 2
    assert parse_ratio("1")[1] == 1


@pytest.mark.parametrize("value", ["2/3", "0", "-1", "abc"])
def test_parse_ratio_rejects(value):
    with pytest.raises(RegimeError):
        parse_ratio(value)


def test_parse_ratio_respects_k_max():
    with pytest.raises(RegimeError, match="k_max"):
        parse_ratio("1/60", k_max=50)


def test_budget_curve_shape():
    curve = budget_curve(LV, _params(), ["3", "1/2", "1", "1/3", "2"])
    assert curve["ratio"].tolist() == pytest.approx([1 / 3, 1 / 2, 1.0, 2.0, 3.0])
    above = curve[curve["ratio"] >= 1]["mu_local"].tolist()
    assert above[0] == above[1] == above[2]
    assert above[0] == pytest.approx(PLATEAU, abs=2e-6)
    below = curve[curve["ratio"] < 1]["mu_local"].tolist()
    assert below[0] > below[1] > above[0]
    assert below[1] == pytest.approx(0.43743, abs=1e-5)
    assert curve["regime"].tolist() == [
        "harvest_multiple", "harvest_multiple", "harvest_multiple", "release_multiple", "release_multiple",
    ]


def test_budget_curve_trivial():
    curve = budget_curve(LV, _params(alpha_x=0.9), ["1/2", "1", "2"])
    assert curve["trivial"].all()
    assert (curve["mu_local"] == 0.0).all()


def test_monotonicity_on_figure_parameters():
    result = monotonicity_check(_params(), 1.0, 1.0, k_max=50)
    assert result
    assert result.offending_k is None
    assert result.exceeds_plateau
    assert result.values[0] == pytest.approx(result.plateau, rel=1e-12)
    assert math.isfinite(result.values[-1])


def test_monotonicity_on_random_draws():
    rng = np.random.default_rng(8)
    for _ in range(20):
        params = draw_params(rng, "harvest", k_max=1)
        fp0, gp0 = draw_rates(rng, params)
        assert monotonicity_check(params, fp0 / gp0, gp0, k_max=50)


def test_monotonicity_vacuous_when_harvest_suffices():
    with pytest.raises(ThresholdError, match="vacuous"):
        monotonicity_check(_params(alpha_x=0.9), 1.0, 1.0)


# ── Simulation against the thresholds ────────────────────────────

@pytest.mark.parametrize("T_r", [0.5, 1.0, 2.0, 3.0])
def test_empirical_threshold_matches_formula(T_r):
    params = _params(T_r=T_r)
    expected = mu_lower(1.0, 1.0, params).value
    found = empirical_threshold(LV, params, (0.1, 1.0), iterations=20)
    assert found == pytest.approx(expected, rel=0.02)


def test_empirical_threshold_harvest_side_k3():
    params = _params(T_r=1.0 / 3.0)
    found = empirical_threshold(LV, params, (0.1, 1.0), iterations=20, periods=30)
    assert found == pytest.approx(mu_lower_h(1.0, 1.0, params).value, rel=0.02)


def test_empirical_threshold_needs_sign_change():
    with pytest.raises(ThresholdError, match="no sign change"):
        empirical_threshold(LV, _params(), (0.6, 1.0), iterations=5, periods=20)


def test_empirical_threshold_refuses_incommensurate():
    with pytest.raises(RegimeError):
        empirical_threshold(LV, _params(T_r=math.sqrt(2.0)), (0.1, 1.0))


def test_above_global_threshold_pest_goes_extinct():
    params = _params(mu=1.1 * mu_lower_h(1.0, 1.0, _params()).value)
    y_star = PeriodicSolution.from_params(params).y_star
    for x0 in (0.1, 1.0, 5.0):
        for y0 in (0.0, y_star, 3 * y_star):
            trace = simulate(LV, params, x0=x0, y0=y0, t_end=1000.0, dt=1e-2, record_every=10)
            assert detect_extinction(trace, 1e-6, 10.0) is not None


def test_below_local_threshold_pest_persists():
    params = _params(mu=0.9 * mu_lower_h(1.0, 1.0, _params()).value)
    y_star = PeriodicSolution.from_params(params).y_star
    trace = simulate(LV, params, x0=1e-6, y0=y_star, t_end=200.0, dt=1e-2)
    assert trace.x.min() > 1e-8
    assert detect_extinction(trace, 1e-6, 10.0) is None
