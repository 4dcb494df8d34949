"""
Simulation trace.
=================
Samples are ordered by time. Every impulse contributes two rows at the same
instant: the pre-impulse state (event "<kind>_pre") and the post-impulse state
("<kind>_post"). Left queries at an impulse instant return the pre value,
right queries the post value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import pandas as pd

from ..model.params import ImpulseParams
from .schedule import ImpulseKind, State

Side = Literal["left", "right"]

TRACE_COLUMNS = ["t", "x", "y", "event"]


@dataclass(frozen=True)
class ImpulseRecord:
    time: float
    kind: ImpulseKind
    pre: State
    post: State


@dataclass(frozen=True)
class Trace:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    events: tuple[str, ...]
    impulses: tuple[ImpulseRecord, ...]
    params: ImpulseParams
    clamped: bool = False
    clamp_count: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.t, self.x, self.y):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def value_at(self, t: float, side: Side = "right") -> State:
        """State at time t; pre/post at impulse instants, linear interpolation elsewhere."""
        if t < self.t[0] or t > self.t[-1]:
            raise ValueError(f"t={t} outside trace span [{self.t[0]}, {self.t[-1]}]")
        lo = int(np.searchsorted(self.t, t, side="left"))
        hi = int(np.searchsorted(self.t, t, side="right"))
        if hi > lo:
            # sample(s) exactly at t
            idx = lo if side == "left" else hi - 1
            return State(float(self.x[idx]), float(self.y[idx]))
        i0, i1 = lo - 1, lo
        t0, t1 = self.t[i0], self.t[i1]
        w = (t - t0) / (t1 - t0)
        return State(
            float(self.x[i0] + w * (self.x[i1] - self.x[i0])),
            float(self.y[i0] + w * (self.y[i1] - self.y[i0])),
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "x": self.x, "y": self.y, "event": list(self.events)},
                            columns=TRACE_COLUMNS)


def reference_levels(trace: Trace) -> list[tuple[float, float, float]]:
    """Post-impulse (t, x, y) at every coinciding harvest+release instant."""
    return [(r.time, r.post.x, r.post.y) for r in trace.impulses if r.kind == "both"]


def detect_extinction(trace: Trace, threshold: float, hold: float) -> float | None:
    """Earliest sample time t with x < threshold for every sample in [t, t + hold]; None if no such window."""
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    span = trace.t[-1] - trace.t[0]
    if hold > span:
        raise ValueError(f"hold={hold} exceeds trace span {span}")

    below = trace.x < threshold
    run_start: int | None = None
    for i, t in enumerate(trace.t):
        if below[i]:
            if run_start is None:
                run_start = i
            if t >= trace.t[run_start] + hold:
                return float(trace.t[run_start])
        else:
            if run_start is not None and t > trace.t[run_start] + hold:
                return float(trace.t[run_start])
            run_start = None
    return None
