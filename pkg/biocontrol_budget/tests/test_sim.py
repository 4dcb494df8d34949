"""
Tests for the impulse schedule, impulse maps and the impulsive integrator.

Run: python -m pytest biocontrol_budget/tests/test_sim.py -v
"""

import math

import numpy as np
import pytest

from biocontrol_budget.errors import SimulationError
from biocontrol_budget.model import ImpulseParams, ResponseModel, from_expressions, lotka_volterra
from biocontrol_budget.sim import (
    State,
    apply_impulse,
    build_schedule,
    detect_extinction,
    reference_levels,
    simulate,
)

LV = lotka_volterra(1.0, 1.0, 1.0)


def _params(**overrides) -> ImpulseParams:
    values = dict(d=1.0, alpha_x=0.5, alpha_y=0.5, T_h=1.0, T_r=1.0, mu=0.5)
    values.update(overrides)
    return ImpulseParams(**values)


def _schedule(params: ImpulseParams, t_end: float) -> list[tuple[float, str]]:
    return [(e.time, e.kind) for e in build_schedule(params, t_end)]


# ── Schedule ─────────────────────────────────────────────────────

def test_schedule_harvest_multiple():
    assert _schedule(_params(T_h=1.0, T_r=0.5), 2.0) == [
        (0.5, "release"), (1.0, "both"), (1.5, "release"), (2.0, "both"),
    ]


def test_schedule_release_multiple():
    assert _schedule(_params(T_h=1.0, T_r=3.0), 6.0) == [
        (1.0, "harvest"), (2.0, "harvest"), (3.0, "both"),
        (4.0, "harvest"), (5.0, "harvest"), (6.0, "both"),
    ]


def test_schedule_indices():
    events = build_schedule(_params(T_h=1.0, T_r=0.25), 2.0)
    both = [e for e in events if e.kind == "both"]
    assert [(e.n, e.m) for e in both] == [(1, 4), (2, 8)]


def test_schedule_incommensurate_merges_coincidences():
    assert _schedule(_params(T_h=1.0, T_r=1.5), 3.0) == [
        (1.0, "harvest"), (1.5, "release"), (2.0, "harvest"), (3.0, "both"),
    ]


def test_schedule_incommensurate_has_no_coincidence():
    events = build_schedule(_params(T_h=1.0, T_r=math.sqrt(2.0)), 5.0)
    assert [e.kind for e in events].count("both") == 0
    assert [e.kind for e in events].count("harvest") == 5
    assert [e.kind for e in events].count("release") == 3
    times = [e.time for e in events]
    assert times == sorted(times)


def test_schedule_lattice_is_not_accumulated():
    events = build_schedule(_params(T_h=1.0, T_r=0.1), 10.0)
    assert len(events) == 100
    assert events[-1].time == 10.0
    assert events[-1].kind == "both"


def test_schedule_rejects_non_positive_horizon():
    with pytest.raises(ValueError):
        build_schedule(_params(), 0.0)


# ── Impulse maps ─────────────────────────────────────────────────

def test_harvest_map():
    assert apply_impulse(State(2.0, 4.0), "harvest", _params(alpha_x=0.25, alpha_y=0.5)) == State(1.5, 2.0)


def test_release_map():
    assert apply_impulse(State(2.0, 4.0), "release", _params(T_r=2.0, mu=0.5)) == State(2.0, 5.0)


def test_coinciding_map_harvests_before_release():
    post = apply_impulse(State(2.0, 4.0), "both", _params(alpha_x=0.5, alpha_y=0.5, mu=1.0))
    assert post == State(1.0, 3.0)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        apply_impulse(State(1.0, 1.0), "spray", _params())


# ── Integrator ───────────────────────────────────────────────────

def test_zero_state_stays_zero():
    trace = simulate(LV, _params(mu=0.0), x0=0.0, y0=0.0, t_end=5.0)
    assert np.all(trace.x == 0.0)
    assert np.all(trace.y == 0.0)


def test_pest_free_decay_between_impulses():
    params = _params(alpha_x=0.0, alpha_y=0.0, mu=0.0)
    trace = simulate(LV, params, x0=0.0, y0=2.0, t_end=3.0)
    expected = 2.0 * np.exp(-trace.t)
    assert np.allclose(trace.y, expected, rtol=1e-8, atol=0.0)


def test_every_impulse_instant_is_sampled_exactly():
    params = _params(T_h=1.0, T_r=0.3)
    trace = simulate(LV, params, x0=1.0, y0=0.5, t_end=4.0, record_every=50)
    for record in trace.impulses:
        rows = [i for i, t in enumerate(trace.t) if t == record.time]
        assert len(rows) == 2
        assert trace.events[rows[0]].endswith("_pre")
        assert trace.events[rows[1]].endswith("_post")


def test_impulse_laws_hold_exactly_in_trace():
    params = _params(T_h=1.0, T_r=0.5, alpha_x=0.3, alpha_y=0.6, mu=0.8)
    trace = simulate(LV, params, x0=1.0, y0=0.5, t_end=6.0)
    assert trace.impulses
    for record in trace.impulses:
        if record.kind == "both":
            assert record.post.x == (1 - 0.3) * record.pre.x
            assert record.post.y == (1 - 0.6) * record.pre.y + 0.8 * 0.5
        elif record.kind == "release":
            assert record.post.x == record.pre.x
            assert record.post.y == record.pre.y + 0.8 * 0.5


def test_value_at_left_and_right_of_impulse():
    trace = simulate(LV, _params(), x0=1.0, y0=0.2, t_end=3.0)
    pre = trace.value_at(1.0, side="left")
    post = trace.value_at(1.0, side="right")
    assert post.x == 0.5 * pre.x
    assert post.y == 0.5 * pre.y + 0.5


def test_value_at_outside_span():
    trace = simulate(LV, _params(), x0=1.0, y0=0.2, t_end=3.0)
    with pytest.raises(ValueError):
        trace.value_at(3.5)


def test_noop_impulses_match_impulse_free_run():
    params = _params(T_h=1.0, T_r=0.5, alpha_x=0.0, alpha_y=0.0, mu=0.0)
    dt = 1.0 / 32.0
    plain = simulate(LV, params, x0=1.0, y0=0.5, t_end=4.0, dt=dt, with_impulses=False)
    impulsive = simulate(LV, params, x0=1.0, y0=0.5, t_end=4.0, dt=dt)
    for t, x, y in zip(plain.t, plain.x, plain.y):
        state = impulsive.value_at(float(t))
        assert state.x == x
        assert state.y == y


def test_converges_to_periodic_level():
    params = _params(mu=1.0)
    trace = simulate(LV, params, x0=0.0, y0=0.0, t_end=30.0)
    _, x_level, y_level = reference_levels(trace)[-1]
    assert x_level == 0.0
    assert y_level == pytest.approx(1.0 / (1.0 - 0.5 * math.exp(-1.0)), rel=1e-9)


def test_trace_arrays_read_only():
    trace = simulate(LV, _params(), x0=1.0, y0=0.0, t_end=2.0)
    with pytest.raises(ValueError):
        trace.x[0] = 5.0


def test_horizon_extends_past_last_impulse():
    trace = simulate(LV, _params(), x0=1.0, y0=0.0, t_end=2.5)
    assert trace.t_end == 2.5
    assert trace.events[-1] == ""


def test_dt_above_tenth_of_period_rejected():
    with pytest.raises(ValueError, match="min"):
        simulate(LV, _params(T_r=0.5), x0=1.0, y0=0.0, t_end=2.0, dt=0.1)


def test_negative_initial_state_rejected():
    with pytest.raises(ValueError):
        simulate(LV, _params(), x0=-1.0, y0=0.0, t_end=2.0)


def test_negative_roundoff_is_clamped():
    draining = ResponseModel(f=lambda x: -1.0, g=lambda x: 0.0, h=lambda x: 0.0)
    trace = simulate(draining, _params(), x0=0.05, y0=0.0, t_end=1.0)
    assert trace.clamped
    assert trace.clamp_count > 0
    assert trace.x.min() >= 0.0


def test_blow_up_raises_simulation_error():
    explosive = from_expressions("x^2", "x", "x")
    with pytest.raises(SimulationError) as info:
        simulate(explosive, _params(), x0=10.0, y0=0.0, t_end=1.0)
    assert 0.0 < info.value.time <= 1.0


def test_to_frame_columns():
    frame = simulate(LV, _params(), x0=1.0, y0=0.0, t_end=2.0, record_every=100).to_frame()
    assert list(frame.columns) == ["t", "x", "y", "event"]
    assert "both_post" in set(frame["event"])


# ── Extinction detection ─────────────────────────────────────────

def test_extinct_from_start():
    trace = simulate(LV, _params(), x0=0.0, y0=1.0, t_end=5.0, record_every=10)
    assert detect_extinction(trace, 1e-6, 1.0) == 0.0


def test_growing_pest_never_extinct():
    params = _params(alpha_x=0.0, alpha_y=0.0, mu=0.0)
    trace = simulate(LV, params, x0=1.0, y0=0.0, t_end=5.0, record_every=10)
    assert detect_extinction(trace, 1e-6, 1.0) is None


def test_hold_longer_than_trace_rejected():
    trace = simulate(LV, _params(), x0=0.0, y0=1.0, t_end=2.0)
    with pytest.raises(ValueError, match="exceeds"):
        detect_extinction(trace, 1e-6, 5.0)
