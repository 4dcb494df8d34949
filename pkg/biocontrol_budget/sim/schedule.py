"""
Impulse schedule and impulse maps.
==================================
Harvests at n·T_h remove fractions alpha_x of pests and alpha_y of predators;
releases at m·T_r add mu·T_r predators. Where both fall on the same instant a
single "both" event applies the harvest first and then the release.

Synchronized schedules are generated on the integer lattice of the shorter
period and coincidence is integer divisibility. Incommensurate schedules merge
both lattices and treat instants closer than 1e-9·min(T_h, T_r) as coinciding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from ..model.params import ImpulseParams

ImpulseKind = Literal["harvest", "release", "both"]

COINCIDENCE_TOLERANCE = 1e-9
_LATTICE_SLACK = 1e-9


@dataclass(frozen=True)
class State:
    x: float
    y: float


@dataclass(frozen=True)
class ImpulseEvent:
    time: float
    kind: ImpulseKind
    n: int | None = None     # harvest index
    m: int | None = None     # release index


def _lattice_count(t_end: float, period: float) -> int:
    return math.floor(t_end / period + _LATTICE_SLACK)


def _merge(params: ImpulseParams, t_end: float) -> list[ImpulseEvent]:
    harvests = [(n * params.T_h, n) for n in range(1, _lattice_count(t_end, params.T_h) + 1)]
    releases = [(m * params.T_r, m) for m in range(1, _lattice_count(t_end, params.T_r) + 1)]
    gap = COINCIDENCE_TOLERANCE * min(params.T_h, params.T_r)
    events: list[ImpulseEvent] = []
    i = j = 0
    while i < len(harvests) or j < len(releases):
        if j == len(releases) or (i < len(harvests) and harvests[i][0] < releases[j][0] - gap):
            events.append(ImpulseEvent(harvests[i][0], "harvest", n=harvests[i][1]))
            i += 1
        elif i == len(harvests) or releases[j][0] < harvests[i][0] - gap:
            events.append(ImpulseEvent(releases[j][0], "release", m=releases[j][1]))
            j += 1
        else:
            events.append(ImpulseEvent(harvests[i][0], "both", n=harvests[i][1], m=releases[j][1]))
            i += 1
            j += 1
    return events


def build_schedule(params: ImpulseParams, t_end: float) -> list[ImpulseEvent]:
    """All impulses in (0, t_end], strictly time-ordered."""
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end}")
    regime = params.regime
    if regime.kind == "incommensurate":
        return _merge(params, t_end)

    k = regime.k
    if regime.kind == "harvest_multiple":
        base, long_period = params.T_r, params.T_h
    else:
        base, long_period = params.T_h, params.T_r

    events = []
    for j in range(1, _lattice_count(t_end, base) + 1):
        q, rem = divmod(j, k)
        if rem == 0:
            if regime.kind == "harvest_multiple":
                events.append(ImpulseEvent(q * long_period, "both", n=q, m=j))
            else:
                events.append(ImpulseEvent(q * long_period, "both", n=j, m=q))
        elif regime.kind == "harvest_multiple":
            events.append(ImpulseEvent(j * base, "release", m=j))
        else:
            events.append(ImpulseEvent(j * base, "harvest", n=j))
    return events


def apply_impulse(state: State, kind: ImpulseKind, params: ImpulseParams) -> State:
    if kind == "harvest":
        return State((1.0 - params.alpha_x) * state.x, (1.0 - params.alpha_y) * state.y)
    if kind == "release":
        return State(state.x, state.y + params.mu * params.T_r)
    if kind == "both":
        return State((1.0 - params.alpha_x) * state.x, (1.0 - params.alpha_y) * state.y + params.mu * params.T_r)
    raise ValueError(f"unknown impulse kind {kind!r}")
