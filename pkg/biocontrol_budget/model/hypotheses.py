"""
Hypothesis checks and derived quantities of a response model.
=============================================================
The stability results assume: f(0) = g(0) = h(0) = 0, g and h
positive for x > 0, g'(0) > 0, and bounded ratios f/g and g/x on x >= 0.
We check these on a log-spaced grid over (0, x_max] and estimate:

  - f'(0), g'(0), h'(0) by Richardson-extrapolated central differences
  - S = sup f(x)/g(x) and r = sup g(x)/x, grid maxima refined by bounded
    golden-section search, with the 0+ limits f'(0)/g'(0) and g'(0) as candidates
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import ExprDomainError, HypothesisError
from .responses import ResponseFn, ResponseModel

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-12
SLOPE_STEP = 1e-8
MIN_SLOPE = 1e-6
DERIVATIVE_STEPS = (1e-4, 1e-5, 1e-6)
GRID_START = 1e-8          # grid starts at x_max · GRID_START
MIN_GRID_N = 100
UNBOUNDED_SLOPE = 0.5
UNBOUNDED_VALUE = 1e9

_EVAL_ERRORS = (ExprDomainError, ValueError, ZeroDivisionError, OverflowError)


# ── Report types ───────────────────────────────────────────────────

@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    passed: bool
    witness: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness, "detail": self.detail}


@dataclass
class HypothesisReport:
    checks: list[HypothesisCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[HypothesisCheck]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> HypothesisCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


@dataclass(frozen=True)
class DerivativesAtZero:
    fp0: float
    gp0: float
    hp0: float
    fp0_error: float
    gp0_error: float
    hp0_error: float


@dataclass(frozen=True)
class SupEstimates:
    S: float
    r: float
    S_local: float
    r_local: float
    tolerance: float
    # ratios whose grid maximum sits at x_max: S or r may be underestimated
    not_reached: tuple[str, ...] = ()


# ── Sampling ───────────────────────────────────────────────────────

def working_grid(x_max: float, grid_n: int) -> np.ndarray:
    if grid_n < MIN_GRID_N:
        raise ValueError(f"grid_n must be >= {MIN_GRID_N}, got {grid_n}")
    if not x_max > 0:
        raise ValueError(f"x_max must be > 0, got {x_max}")
    return np.geomspace(x_max * GRID_START, x_max, grid_n)


def _sample(fn: ResponseFn, xs: np.ndarray) -> tuple[np.ndarray, float | None, str]:
    """Evaluate fn pointwise. Returns (values, first failing x, error text)."""
    values = np.empty_like(xs)
    for i, x in enumerate(xs):
        try:
            values[i] = fn(float(x))
        except _EVAL_ERRORS as exc:
            return values[:i], float(x), str(exc)
    return values, None, ""


def _rising_at_x_max(xs: np.ndarray, ratio: np.ndarray) -> bool:
    """Ratio increases strictly over the last decade of the grid."""
    tail = xs >= xs[-1] / 10.0
    if tail.sum() < 2:
        return False
    return bool(np.all(np.diff(ratio[tail]) > 0))


def _grows_without_bound(xs: np.ndarray, ratio: np.ndarray) -> bool:
    """Ratio rises at x_max and either scales like a power or is huge."""
    if not _rising_at_x_max(xs, ratio):
        return False
    tail = xs >= xs[-1] / 10.0
    r_tail = ratio[tail]
    if r_tail[-1] > UNBOUNDED_VALUE:
        return True
    if r_tail[0] <= 0:
        return False
    slope = math.log(r_tail[-1] / r_tail[0]) / math.log(xs[tail][-1] / xs[tail][0])
    return slope >= UNBOUNDED_SLOPE


# ── Hypothesis validation ──────────────────────────────────────────

def _zero_check(name: str, fn: ResponseFn) -> HypothesisCheck:
    label = f"{name}(0)=0"
    try:
        value = fn(0.0)
    except _EVAL_ERRORS as exc:
        return HypothesisCheck(label, False, 0.0, f"evaluation failed: {exc}")
    if not math.isfinite(value) or abs(value) > ZERO_TOLERANCE:
        return HypothesisCheck(label, False, 0.0, f"{name}(0) = {value!r}")
    return HypothesisCheck(label, True)


def _positive_check(name: str, fn: ResponseFn, xs: np.ndarray) -> tuple[HypothesisCheck, np.ndarray | None]:
    label = f"{name}>0 on grid"
    values, bad_x, error = _sample(fn, xs)
    if bad_x is not None:
        return HypothesisCheck(label, False, bad_x, f"evaluation failed: {error}"), None
    if not np.all(np.isfinite(values)):
        idx = int(np.argmin(np.isfinite(values)))
        return HypothesisCheck(label, False, float(xs[idx]), "non-finite value"), None
    non_positive = np.flatnonzero(values <= 0)
    if non_positive.size:
        idx = int(non_positive[0])
        return HypothesisCheck(label, False, float(xs[idx]), f"{name}({xs[idx]:.6g}) = {values[idx]:.6g}"), values
    return HypothesisCheck(label, True), values


def _slope_check(g: ResponseFn) -> HypothesisCheck:
    label = "g'(0)>0"
    try:
        slope = (g(SLOPE_STEP) - g(0.0)) / SLOPE_STEP
    except _EVAL_ERRORS as exc:
        return HypothesisCheck(label, False, 0.0, f"evaluation failed: {exc}")
    if not math.isfinite(slope) or slope <= MIN_SLOPE:
        return HypothesisCheck(label, False, 0.0, f"forward difference g'(0) ~ {slope:.3g}")
    return HypothesisCheck(label, True, detail=f"g'(0) ~ {slope:.6g}")


def _bounded_check(label: str, xs: np.ndarray, ratio: np.ndarray | None) -> HypothesisCheck:
    if ratio is None:
        return HypothesisCheck(label, False, None, "ratio undefined (denominator check failed)")
    if not np.all(np.isfinite(ratio)):
        idx = int(np.argmin(np.isfinite(ratio)))
        return HypothesisCheck(label, False, float(xs[idx]), "non-finite ratio")
    if _grows_without_bound(xs, ratio):
        return HypothesisCheck(label, False, float(xs[-1]), f"ratio still growing at x_max ({ratio[-1]:.6g})")
    return HypothesisCheck(label, True, detail=f"max on grid {ratio.max():.6g}")


def validate_hypotheses(model: ResponseModel, grid_n: int = 400) -> HypothesisReport:
    """Run every assumption check; failures are reported with a witness point, never raised."""
    xs = working_grid(model.x_max, grid_n)
    report = HypothesisReport()

    for name, fn in model.functions().items():
        report.checks.append(_zero_check(name, fn))

    f_values, f_bad, f_error = _sample(model.f, xs)
    g_check, g_values = _positive_check("g", model.g, xs)
    h_check, _ = _positive_check("h", model.h, xs)
    report.checks.extend([g_check, h_check, _slope_check(model.g)])

    f_over_g = None
    g_over_x = None
    if g_values is not None and g_check.passed:
        g_over_x = g_values / xs
        if f_bad is None:
            f_over_g = f_values / g_values
    if f_bad is not None:
        report.checks.append(HypothesisCheck("f/g bounded", False, f_bad, f"f evaluation failed: {f_error}"))
    else:
        report.checks.append(_bounded_check("f/g bounded", xs, f_over_g))
    report.checks.append(_bounded_check("g/x bounded", xs, g_over_x))

    for c in report.failures:
        logger.warning(f"[MODEL] Check failed: {c.name} at x={c.witness} ({c.detail})")
    return report


# ── Derivatives at zero ────────────────────────────────────────────

def _difference(fn: ResponseFn, step: float) -> float:
    try:
        return (fn(step) - fn(-step)) / (2.0 * step)
    except _EVAL_ERRORS:
        # one-sided, second order
        return (-3.0 * fn(0.0) + 4.0 * fn(step) - fn(2.0 * step)) / (2.0 * step)


def _derivative(name: str, fn: ResponseFn) -> tuple[float, float]:
    try:
        estimates = [_difference(fn, step) for step in DERIVATIVE_STEPS]
    except _EVAL_ERRORS as exc:
        raise HypothesisError(f"cannot evaluate {name} near 0: {exc}") from exc
    if not all(math.isfinite(v) for v in estimates):
        raise HypothesisError(f"non-finite evaluation of {name} near 0")
    # steps shrink by 10 and the error is O(step^2)
    extrapolated = [(100.0 * fine - coarse) / 99.0 for coarse, fine in zip(estimates, estimates[1:])]
    return extrapolated[-1], abs(extrapolated[-1] - extrapolated[0])


def derivatives_at_zero(model: ResponseModel) -> DerivativesAtZero:
    fp0, fp0_err = _derivative("f", model.f)
    gp0, gp0_err = _derivative("g", model.g)
    hp0, hp0_err = _derivative("h", model.h)
    return DerivativesAtZero(fp0, gp0, hp0, fp0_err, gp0_err, hp0_err)


# ── Supremum estimates ─────────────────────────────────────────────

def _refine_max(ratio_fn: ResponseFn, xs: np.ndarray, values: np.ndarray) -> float:
    """Golden-section search on the cells around the best grid point."""
    idx = int(np.argmax(values))
    lo = float(xs[max(idx - 1, 0)])
    hi = float(xs[min(idx + 1, len(xs) - 1)])
    best = float(values[idx])
    if hi <= lo:
        return best
    try:
        result = minimize_scalar(lambda x: -ratio_fn(x), bounds=(lo, hi), method="bounded",
                                 options={"xatol": lo * 1e-10})
    except _EVAL_ERRORS:
        return best
    if result.success and math.isfinite(result.fun):
        best = max(best, -float(result.fun))
    return best


def estimate_sup_ratios(
    model: ResponseModel,
    grid_n: int = 400,
    derivatives: DerivativesAtZero | None = None,
) -> SupEstimates:
    """S = sup f/g and r = sup g/x over (0, x_max], never below their 0+ limits.

    Raises HypothesisError when a ratio is non-finite or still rising past 1e9 at
    x_max. A bounded ratio still rising at x_max is listed in `not_reached`.
    """
    derivatives = derivatives or derivatives_at_zero(model)
    if derivatives.gp0 <= 0:
        raise HypothesisError(f"g'(0) must be > 0, got {derivatives.gp0:.6g}")
    S_local = derivatives.fp0 / derivatives.gp0
    r_local = derivatives.gp0

    xs = working_grid(model.x_max, grid_n)
    f_values, f_bad, f_error = _sample(model.f, xs)
    g_values, g_bad, g_error = _sample(model.g, xs)
    if f_bad is not None or g_bad is not None:
        where = f_bad if f_bad is not None else g_bad
        raise HypothesisError(f"evaluation failed at x={where}: {f_error or g_error}")
    if np.any(g_values <= 0):
        raise HypothesisError("g must be positive on (0, x_max]")

    f_over_g = f_values / g_values
    g_over_x = g_values / xs
    still_rising = []
    for label, ratio in (("f/g", f_over_g), ("g/x", g_over_x)):
        if not np.all(np.isfinite(ratio)):
            raise HypothesisError(f"model assumption boundedness violated: {label} non-finite on the grid")
        if not _rising_at_x_max(xs, ratio):
            continue
        if ratio[-1] > UNBOUNDED_VALUE:
            raise HypothesisError(f"model assumption boundedness violated: {label} unbounded near x_max")
        still_rising.append(label)
        logger.warning(f"[MODEL] {label} sup not reached within x_max={model.x_max:g} "
                       f"({ratio[-1]:.6g} at x_max); increase model.x_max")

    S = max(_refine_max(lambda x: model.f(x) / model.g(x), xs, f_over_g), S_local)
    r = max(_refine_max(lambda x: model.g(x) / x, xs, g_over_x), r_local)
    tolerance = max(derivatives.fp0_error, derivatives.gp0_error, 1e-12)
    logger.debug(f"[MODEL] S={S:.9g} (local {S_local:.9g}), r={r:.9g} (local {r_local:.9g})")
    return SupEstimates(S=S, r=r, S_local=S_local, r_local=r_local, tolerance=tolerance,
                        not_reached=tuple(still_rising))
