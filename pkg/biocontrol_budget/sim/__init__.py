"""Impulsive simulation: schedule, integrator and trace."""

from .integrator import default_dt, simulate
from .schedule import ImpulseEvent, State, apply_impulse, build_schedule
from .trace import ImpulseRecord, Trace, detect_extinction, reference_levels

__all__ = [
    "default_dt", "simulate",
    "ImpulseEvent", "State", "apply_impulse", "build_schedule",
    "ImpulseRecord", "Trace", "detect_extinction", "reference_levels",
]
