"""
Impulsive integrator.
=====================
Classic fourth-order Runge–Kutta with a fixed step between impulses:

    x' = f(x) - g(x)·y
    y' = h(x)·y - d·y

Each inter-impulse interval is cut into steps of dt, the last one shortened so
that a step boundary lands exactly on the impulse instant. The pre- and
post-impulse states are both recorded.

Usage:
    trace = simulate(lotka_volterra(1, 1, 1), params, x0=1.0, y0=0.5, t_end=50)
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import ExprDomainError, SimulationError
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel
from .schedule import COINCIDENCE_TOLERANCE, State, apply_impulse, build_schedule
from .trace import ImpulseRecord, Trace

logger = logging.getLogger(__name__)

DEFAULT_DT_FRACTION = 1e-3
MAX_DT_FRACTION = 0.1


def default_dt(params: ImpulseParams) -> float:
    return DEFAULT_DT_FRACTION * min(params.T_h, params.T_r)


class _Recorder:
    def __init__(self, record_every: int):
        self.record_every = record_every
        self.t: list[float] = []
        self.x: list[float] = []
        self.y: list[float] = []
        self.events: list[str] = []

    def add(self, t: float, x: float, y: float, event: str = "") -> None:
        self.t.append(t)
        self.x.append(x)
        self.y.append(y)
        self.events.append(event)


def _rk4_step(model: ResponseModel, d: float, x: float, y: float, h: float) -> tuple[float, float]:
    f, g, hh = model.f, model.g, model.h

    def rhs(xi: float, yi: float) -> tuple[float, float]:
        gx = g(xi)
        return f(xi) - gx * yi, hh(xi) * yi - d * yi

    k1x, k1y = rhs(x, y)
    k2x, k2y = rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = rhs(x + h * k3x, y + h * k3y)
    return (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )


class _Flow:
    """Integrates between impulses and tracks clamping of roundoff below zero."""

    def __init__(self, model: ResponseModel, params: ImpulseParams, dt: float, recorder: _Recorder):
        self.model = model
        self.d = params.d
        self.dt = dt
        self.recorder = recorder
        self.clamp_count = 0

    def advance(self, state: State, t0: float, t1: float) -> State:
        x, y = state.x, state.y
        span = t1 - t0
        n_steps = max(math.ceil(span / self.dt - 1e-9), 1)
        t = t0
        for i in range(1, n_steps + 1):
            t_next = t1 if i == n_steps else t0 + i * self.dt
            try:
                x, y = _rk4_step(self.model, self.d, x, y, t_next - t)
            except (ExprDomainError, ValueError, ZeroDivisionError, OverflowError) as exc:
                raise SimulationError(f"response evaluation failed ({exc})", t) from exc
            if not (math.isfinite(x) and math.isfinite(y)):
                raise SimulationError("state became non-finite", t_next)
            if x < 0.0 or y < 0.0:
                self.clamp_count += 1
                x, y = max(x, 0.0), max(y, 0.0)
            t = t_next
            if i < n_steps and i % self.recorder.record_every == 0:
                self.recorder.add(t, x, y)
        return State(x, y)


def simulate(
    model: ResponseModel,
    params: ImpulseParams,
    x0: float,
    y0: float,
    t_end: float,
    dt: float | None = None,
    record_every: int = 1,
    with_impulses: bool = True,
) -> Trace:
    """Integrate the impulsive system on [0, t_end]. Raises SimulationError on blow-up."""
    if x0 < 0 or y0 < 0:
        raise ValueError(f"initial state must be non-negative, got x0={x0}, y0={y0}")
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end}")
    dt = default_dt(params) if dt is None else dt
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if dt > MAX_DT_FRACTION * min(params.T_h, params.T_r) * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds min(T_h, T_r)/10")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")

    events = build_schedule(params, t_end) if with_impulses else []
    horizon = max(t_end, events[-1].time) if events else t_end

    recorder = _Recorder(record_every)
    flow = _Flow(model, params, dt, recorder)
    impulses: list[ImpulseRecord] = []

    state = State(float(x0), float(y0))
    recorder.add(0.0, state.x, state.y)
    t = 0.0
    for event in events:
        state = flow.advance(state, t, event.time)
        post = apply_impulse(state, event.kind, params)
        recorder.add(event.time, state.x, state.y, f"{event.kind}_pre")
        recorder.add(event.time, post.x, post.y, f"{event.kind}_post")
        impulses.append(ImpulseRecord(event.time, event.kind, state, post))
        state, t = post, event.time
    if horizon - t > COINCIDENCE_TOLERANCE * dt:
        state = flow.advance(state, t, horizon)
        recorder.add(horizon, state.x, state.y)

    if flow.clamp_count:
        logger.info(f"[SIM] Clamped {flow.clamp_count} negative roundoff value(s) to 0")
    logger.debug(f"[SIM] {len(impulses)} impulses, {len(recorder.t)} samples up to t={horizon:.6g}")
    return Trace(
        t=np.asarray(recorder.t, dtype=float),
        x=np.asarray(recorder.x, dtype=float),
        y=np.asarray(recorder.y, dtype=float),
        events=tuple(recorder.events),
        impulses=tuple(impulses),
        params=params,
        clamped=flow.clamp_count > 0,
        clamp_count=flow.clamp_count,
        meta={"dt": dt, "record_every": record_every, "with_impulses": with_impulses},
    )
