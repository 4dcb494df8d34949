"""
Minimal release budget and stability classification.
====================================================
Linearizing around the pest-free solution gives a triangular period map whose
pest entry is

    B11 = (1 - a_x)   · exp(f'(0)·T_h - g'(0)·∫ y_ph)      releases at least as frequent (T_h = k·T_r)
    B11 = (1 - a_x)^k · exp(f'(0)·T_r - g'(0)·∫ y_pr)      harvests more frequent (T_r = k·T_h)

|B11| < 1 ⇔ the pest-free solution is locally stable. Since the integral is
linear in mu, the condition becomes mu > mu_lower(S, r) with
S = f'(0)/g'(0), r = g'(0). Replacing (S, r) by the suprema of f/g and g/x
gives a sufficient condition for global stability.

    margin        = S + ln(1 - a_x) / (r·T_h)
    mu_lower_h    = d·margin / (1 - A·sigma(k))
    mu_lower_r    = d·margin · (1 - (1 - a_y) e^{-dT_h}) / (1 - e^{-dT_h})
    A             = a_y (1 - e^{-dT_h}) / (1 - (1 - a_y) e^{-dT_h})
    sigma(k)      = e^{-dT_h/k} / (k (1 - e^{-dT_h/k}))

margin <= 0 means harvesting alone clears the pest: the threshold is 0 and flagged trivial.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Literal

from ..analytic.periodic import harvest_loss_factor, integral_y_ph, integral_y_pr
from ..errors import RegimeError, ThresholdError
from ..model.hypotheses import DerivativesAtZero, SupEstimates, derivatives_at_zero, estimate_sup_ratios
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel
from ..utils.numeric import decay_tail, retention_gap

logger = logging.getLogger(__name__)

Classification = Literal["TriviallyStable", "GloballyStable", "LocallyStableOnly", "Unstable"]

SIGMA_LIMIT = 1e12
TRIVIAL_EPS = 1e-12
INCOMMENSURATE_MESSAGE = "no stability formula for incommensurate periods; simulate instead"


@dataclass(frozen=True)
class Threshold:
    value: float
    trivial: bool = False
    reason: str | None = None

    def __float__(self) -> float:
        return self.value


# ── Building blocks ────────────────────────────────────────────────

def sigma(k: int, d: float, T_h: float) -> float:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not (d > 0 and T_h > 0):
        raise ValueError(f"d and T_h must be > 0, got d={d}, T_h={T_h}")
    value = decay_tail(d * T_h, k)
    if value > SIGMA_LIMIT:
        raise ThresholdError(f"sigma({k}) = {value:.3g} diverges (d·T_h too small)")
    return value


def sigma_slope_sign(k: int, d: float, T_h: float) -> float:
    """k·e^{-dT_h/k} + dT_h - k. Positive for every k >= 1, which makes mu_lower_h increase with k."""
    z = d * T_h
    return k * math.exp(-z / k) + z - k


def stability_margin(S: float, r: float, params: ImpulseParams) -> float:
    """S + ln(1 - a_x)/(r·T_h); -inf when a_x = 1."""
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r}")
    if params.alpha_x >= 1.0:
        return -math.inf
    return S + math.log1p(-params.alpha_x) / (r * params.T_h)


def harvest_alone_suffices(S: float, r: float, params: ImpulseParams) -> bool:
    return stability_margin(S, r, params) <= TRIVIAL_EPS * max(1.0, abs(S))


def _trivial(S: float, r: float, params: ImpulseParams) -> Threshold | None:
    if params.alpha_x >= 1.0:
        return Threshold(0.0, True, "alpha_x = 1: every harvest removes all pests")
    if harvest_alone_suffices(S, r, params):
        return Threshold(0.0, True, "harvesting alone keeps the pest-free solution stable")
    return None


# ── Thresholds ─────────────────────────────────────────────────────

def mu_lower_h(S: float, r: float, params: ImpulseParams) -> Threshold:
    """Minimal budget when T_h = k·T_r."""
    k = params.harvest_k()
    trivial = _trivial(S, r, params)
    if trivial:
        return trivial
    d = params.d
    denominator = 1.0 - harvest_loss_factor(params) * sigma(k, d, params.T_h)
    return Threshold(d * stability_margin(S, r, params) / denominator)


def mu_lower_r(S: float, r: float, params: ImpulseParams) -> Threshold:
    """Minimal budget when T_r = k·T_h. Independent of T_r."""
    params.release_k()
    trivial = _trivial(S, r, params)
    if trivial:
        return trivial
    z = params.d * params.T_h
    fraction = retention_gap(params.alpha_y, z) / -math.expm1(-z)
    return Threshold(params.d * stability_margin(S, r, params) * fraction)


def mu_lower(S: float, r: float, params: ImpulseParams) -> Threshold:
    """Dispatch on the detected regime (k = 1 uses the harvest-side form)."""
    regime = params.regime
    if regime.kind == "harvest_multiple":
        return mu_lower_h(S, r, params)
    if regime.kind == "release_multiple":
        return mu_lower_r(S, r, params)
    raise RegimeError(INCOMMENSURATE_MESSAGE)


def pest_free_integral(params: ImpulseParams) -> float:
    regime = params.regime
    if regime.kind == "harvest_multiple":
        return integral_y_ph(params)
    if regime.kind == "release_multiple":
        return integral_y_pr(params)
    raise RegimeError(INCOMMENSURATE_MESSAGE)


def integral_margin(S: float, r: float, params: ImpulseParams) -> float:
    """∫ y_p over the reference period minus (S·T_ref + harvests·ln(1 - a_x)/r). Positive iff mu > mu_lower."""
    regime = params.regime
    if regime.kind == "harvest_multiple":
        T_ref, harvests = params.T_h, 1
    elif regime.kind == "release_multiple":
        T_ref, harvests = params.T_r, regime.k
    else:
        raise RegimeError(INCOMMENSURATE_MESSAGE)
    if params.alpha_x >= 1.0:
        return math.inf
    return pest_free_integral(params) - (S * T_ref + harvests * math.log1p(-params.alpha_x) / r)


# ── Monodromy entries ──────────────────────────────────────────────

def monodromy_diagonal(fp0: float, gp0: float, params: ImpulseParams) -> tuple[float, float]:
    """(B11, B22) of the linearized period map. B22 is the pest-free contraction and is always < 1."""
    regime = params.regime
    if regime.kind == "harvest_multiple":
        T_ref, harvests = params.T_h, 1
    elif regime.kind == "release_multiple":
        T_ref, harvests = params.T_r, regime.k
    else:
        raise RegimeError(INCOMMENSURATE_MESSAGE)
    survive_x = (1.0 - params.alpha_x) ** harvests
    b11 = survive_x * math.exp(fp0 * T_ref - gp0 * pest_free_integral(params)) if survive_x > 0 else 0.0
    b22 = (1.0 - params.alpha_y) ** harvests * math.exp(-params.d * T_ref)
    return b11, b22


def b11_from_rates(fp0: float, gp0: float, params: ImpulseParams) -> float:
    return monodromy_diagonal(fp0, gp0, params)[0]


def b11(model: ResponseModel, params: ImpulseParams) -> float:
    derivatives = derivatives_at_zero(model)
    return b11_from_rates(derivatives.fp0, derivatives.gp0, params)


# ── Classification ─────────────────────────────────────────────────

@dataclass(frozen=True)
class StabilityReport:
    regime: str
    k: int
    mu: float
    S_local: float
    r_local: float
    S_global: float
    r_global: float
    fp0: float
    gp0: float
    hp0: float
    mu_lower_local: float
    mu_lower_global: float
    trivial_local: bool
    trivial_global: bool
    classification: Classification
    trivial_reason: str | None
    boundary: bool
    estimation_tolerance: float
    b11: float
    b22: float
    integral_margin_local: float
    sup_not_reached: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return asdict(self)


def _classify(mu: float, local: Threshold, global_: Threshold) -> tuple[Classification, bool]:
    if global_.trivial:
        return "TriviallyStable", False
    if mu > global_.value:
        return "GloballyStable", False
    if local.trivial or mu > local.value:
        return "LocallyStableOnly", False
    return "Unstable", mu == local.value


def classify(
    model: ResponseModel,
    params: ImpulseParams,
    grid_n: int = 400,
    derivatives: DerivativesAtZero | None = None,
    sups: SupEstimates | None = None,
) -> StabilityReport:
    regime = params.regime
    if not regime.commensurate:
        raise RegimeError(INCOMMENSURATE_MESSAGE)
    derivatives = derivatives or derivatives_at_zero(model)
    sups = sups or estimate_sup_ratios(model, grid_n, derivatives)

    local = mu_lower(sups.S_local, sups.r_local, params)
    global_ = mu_lower(sups.S, sups.r, params)
    classification, boundary = _classify(params.mu, local, global_)
    b11_value, b22_value = monodromy_diagonal(derivatives.fp0, derivatives.gp0, params)

    logger.info(
        f"[BUDGET] {regime}: mu={params.mu:.6g}, mu_local={local.value:.6g}, "
        f"mu_global={global_.value:.6g} -> {classification}"
    )
    return StabilityReport(
        regime=regime.kind,
        k=regime.k,
        mu=params.mu,
        S_local=sups.S_local,
        r_local=sups.r_local,
        S_global=sups.S,
        r_global=sups.r,
        fp0=derivatives.fp0,
        gp0=derivatives.gp0,
        hp0=derivatives.hp0,
        mu_lower_local=local.value,
        mu_lower_global=global_.value,
        trivial_local=local.trivial,
        trivial_global=global_.trivial,
        classification=classification,
        trivial_reason=global_.reason or local.reason,
        boundary=boundary,
        estimation_tolerance=sups.tolerance,
        b11=b11_value,
        b22=b22_value,
        integral_margin_local=integral_margin(sups.S_local, sups.r_local, params),
        sup_not_reached=sups.not_reached,
    )
