"""
Response-function triples (f, g, h).
====================================
  f(x)  pest growth
  g(x)  functional response, pests eaten per predator
  h(x)  numerical response, predator gain per predator

Built-in families:
  lotka_volterra     f = a·x,            g = b·x,                  h = c·x
  logistic_holling   f = a·x·(1 - x/K),  g = c·x / (1 + c·tau·x),  h = gamma·g
  expression         f, g, h given as expression strings in x (see docs/expressions.md)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable

from ..expr import ExprFunction

ResponseFn = Callable[[float], float]

DEFAULT_X_MAX = 1e3


@dataclass(frozen=True)
class ResponseModel:
    f: ResponseFn
    g: ResponseFn
    h: ResponseFn
    x_max: float = DEFAULT_X_MAX
    family: str = "custom"
    coefficients: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.x_max > 0:
            raise ValueError(f"x_max must be > 0, got {self.x_max}")

    def functions(self) -> dict[str, ResponseFn]:
        return {"f": self.f, "g": self.g, "h": self.h}

    def describe(self) -> dict:
        info: dict = {"family": self.family, "x_max": self.x_max}
        if self.coefficients:
            info["coefficients"] = dict(self.coefficients)
        sources = {
            name: fn.source for name, fn in self.functions().items() if isinstance(fn, ExprFunction)
        }
        if sources:
            info["expressions"] = sources
        return info


# ── Built-in families ──────────────────────────────────────────────

def _linear(slope: float, x: float) -> float:
    return slope * x


def _logistic(a: float, K: float, x: float) -> float:
    return a * x * (1.0 - x / K)


def _holling(c: float, tau: float, x: float) -> float:
    return c * x / (1.0 + c * tau * x)


def _scaled(factor: float, fn: ResponseFn, x: float) -> float:
    return factor * fn(x)


def lotka_volterra(a: float, b: float, c: float, x_max: float = DEFAULT_X_MAX) -> ResponseModel:
    return ResponseModel(
        f=partial(_linear, a),
        g=partial(_linear, b),
        h=partial(_linear, c),
        x_max=x_max,
        family="lotka_volterra",
        coefficients={"a": a, "b": b, "c": c},
    )


def logistic_holling(
    a: float, K: float, c: float, tau: float, gamma: float, x_max: float = DEFAULT_X_MAX
) -> ResponseModel:
    if K <= 0:
        raise ValueError(f"K must be > 0, got {K}")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    g = partial(_holling, c, tau)
    return ResponseModel(
        f=partial(_logistic, a, K),
        g=g,
        h=partial(_scaled, gamma, g),
        x_max=x_max,
        family="logistic_holling",
        coefficients={"a": a, "K": K, "c": c, "tau": tau, "gamma": gamma},
    )


def from_expressions(f: str, g: str, h: str, x_max: float = DEFAULT_X_MAX) -> ResponseModel:
    """Build a model from expression strings. Raises ExprSyntaxError on bad input."""
    return ResponseModel(
        f=ExprFunction(f),
        g=ExprFunction(g),
        h=ExprFunction(h),
        x_max=x_max,
        family="expression",
    )
