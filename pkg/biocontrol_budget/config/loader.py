"""
Run configuration loader.
=========================
YAML file with five sections:

    model:   family (lotka_volterra | logistic_holling | expression), coefficients or f/g/h, x_max, grid_n
    params:  d, alpha_x, alpha_y, T_h, T_r, mu           (all required)
    sim:     x0, y0, t_end, dt, record_every, extinction_threshold, extinction_hold
    sweep:   ratios, k_max
    output:  directory, samples

Unknown sections and keys are rejected. Every error names the dotted key and
the YAML line it came from. Numbers may be written as fractions ("1/3").
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from ..errors import ConfigError, ExprSyntaxError, RegimeError
from ..model.params import ImpulseParams
from ..model.responses import ResponseModel, from_expressions, logistic_holling, lotka_volterra
from ..stability.sweep import DEFAULT_K_MAX, DEFAULT_RATIOS, parse_ratio

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).parent.parent / "config.yaml"

FAMILY_KEYS = {
    "lotka_volterra": ("a", "b", "c"),
    "logistic_holling": ("a", "K", "c", "tau", "gamma"),
    "expression": ("f", "g", "h"),
}

SCHEMA: dict[str, set[str]] = {
    "model": {"family", "a", "b", "c", "K", "tau", "gamma", "f", "g", "h", "x_max", "grid_n"},
    "params": {"d", "alpha_x", "alpha_y", "T_h", "T_r", "mu"},
    "sim": {"x0", "y0", "t_end", "dt", "record_every", "extinction_threshold", "extinction_hold"},
    "sweep": {"ratios", "k_max"},
    "output": {"directory", "samples"},
}

SIM_REQUIRED = ("x0", "y0", "t_end")


# ── Config types ───────────────────────────────────────────────────

@dataclass(frozen=True)
class ModelConfig:
    family: str
    coefficients: dict[str, float] = field(default_factory=dict)
    expressions: dict[str, str] = field(default_factory=dict)
    x_max: float = 1e3
    grid_n: int = 400


@dataclass(frozen=True)
class SimConfig:
    x0: float | None = None
    y0: float | None = None
    t_end: float | None = None
    dt: float | None = None
    record_every: int = 1
    extinction_threshold: float = 1e-6
    extinction_hold: float | None = None


@dataclass(frozen=True)
class SweepConfig:
    ratios: tuple = DEFAULT_RATIOS
    k_max: int = DEFAULT_K_MAX


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "output"
    samples: int = 200


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    params: ImpulseParams
    sim: SimConfig
    sweep: SweepConfig
    output: OutputConfig
    source: str = ""
    lines: dict[str, int] = field(default_factory=dict)

    def build_model(self) -> ResponseModel:
        m = self.model
        if m.family == "lotka_volterra":
            return lotka_volterra(**m.coefficients, x_max=m.x_max)
        if m.family == "logistic_holling":
            return logistic_holling(**m.coefficients, x_max=m.x_max)
        return from_expressions(**m.expressions, x_max=m.x_max)

    def require_sim(self) -> None:
        """simulate needs x0, y0 and t_end."""
        for key in SIM_REQUIRED:
            if getattr(self.sim, key) is None:
                raise ConfigError(f"missing key sim.{key}", f"sim.{key}", self.lines.get("sim"))


# ── Parsing helpers ────────────────────────────────────────────────

def _node_lines(root) -> dict[str, int]:
    """Map 'section' and 'section.key' to 1-based line numbers from YAML node marks."""
    lines: dict[str, int] = {}
    if not isinstance(root, yaml.MappingNode):
        return lines
    for key_node, value_node in root.value:
        section = str(key_node.value)
        lines[section] = key_node.start_mark.line + 1
        if isinstance(value_node, yaml.MappingNode):
            for sub_key, _ in value_node.value:
                lines[f"{section}.{sub_key.value}"] = sub_key.start_mark.line + 1
    return lines


class _Section:
    def __init__(self, name: str, data: dict, lines: dict[str, int]):
        self.name = name
        self.data = data
        self.lines = lines

    def line(self, key: str) -> int | None:
        return self.lines.get(f"{self.name}.{key}", self.lines.get(self.name))

    def error(self, key: str, message: str) -> ConfigError:
        dotted = f"{self.name}.{key}"
        return ConfigError(f"{dotted}: {message}", dotted, self.line(key))

    def has(self, key: str) -> bool:
        return key in self.data and self.data[key] is not None

    def number(self, key: str, default=None, required: bool = False) -> float | None:
        if not self.has(key):
            if required:
                dotted = f"{self.name}.{key}"
                raise ConfigError(f"missing key {dotted}", dotted, self.lines.get(self.name))
            return default
        value = self.data[key]
        if isinstance(value, bool):
            raise self.error(key, f"expected a number, got {value!r}")
        if isinstance(value, (int, float)):
            result = float(value)
        elif isinstance(value, str):
            try:
                result = float(Fraction(value.strip()))
            except (ValueError, ZeroDivisionError):
                raise self.error(key, f"expected a number or fraction, got {value!r}") from None
        else:
            raise self.error(key, f"expected a number, got {type(value).__name__}")
        if not math.isfinite(result):
            raise self.error(key, f"must be finite, got {value!r}")
        return result

    def integer(self, key: str, default: int, minimum: int = 1) -> int:
        if not self.has(key):
            return default
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(key, f"expected an integer, got {value!r}")
        if value < minimum:
            raise self.error(key, f"must be >= {minimum}, got {value}")
        return value

    def text(self, key: str, default: str | None = None, required: bool = False) -> str | None:
        if not self.has(key):
            if required:
                dotted = f"{self.name}.{key}"
                raise ConfigError(f"missing key {dotted}", dotted, self.lines.get(self.name))
            return default
        value = self.data[key]
        if not isinstance(value, str):
            raise self.error(key, f"expected a string, got {value!r}")
        return value


def _section(raw: dict, name: str, lines: dict[str, int]) -> _Section:
    data = raw.get(name) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"section {name} must be a mapping", name, lines.get(name))
    for key in data:
        if key not in SCHEMA[name]:
            dotted = f"{name}.{key}"
            raise ConfigError(f"unknown key {dotted}", dotted, lines.get(dotted))
    return _Section(name, data, lines)


# ── Section builders ───────────────────────────────────────────────

def _model_config(section: _Section) -> ModelConfig:
    family = section.text("family", required=True)
    if family not in FAMILY_KEYS:
        raise section.error("family", f"unknown family {family!r}; expected one of {', '.join(FAMILY_KEYS)}")
    wanted = FAMILY_KEYS[family]
    for key in section.data:
        if key not in wanted and key not in ("family", "x_max", "grid_n"):
            raise section.error(key, f"not used by family {family}")

    x_max = section.number("x_max", 1e3)
    if not x_max > 0:
        raise section.error("x_max", f"must be > 0, got {x_max}")
    grid_n = section.integer("grid_n", 400, minimum=100)

    if family == "expression":
        expressions = {}
        for key in wanted:
            source = section.text(key, required=True)
            try:
                from_expressions(source, "x", "x")
            except ExprSyntaxError as exc:
                raise section.error(key, str(exc)) from None
            expressions[key] = source
        return ModelConfig(family, expressions=expressions, x_max=x_max, grid_n=grid_n)

    coefficients = {key: section.number(key, required=True) for key in wanted}
    if family == "logistic_holling":
        if coefficients["K"] <= 0:
            raise section.error("K", f"must be > 0, got {coefficients['K']}")
        if coefficients["tau"] < 0:
            raise section.error("tau", f"must be >= 0, got {coefficients['tau']}")
    return ModelConfig(family, coefficients=coefficients, x_max=x_max, grid_n=grid_n)


def _params(section: _Section) -> ImpulseParams:
    values = {key: section.number(key, required=True) for key in ("d", "alpha_x", "alpha_y", "T_h", "T_r", "mu")}
    for key in ("d", "T_h", "T_r"):
        if not values[key] > 0:
            raise section.error(key, f"must be > 0, got {values[key]}")
    if values["mu"] < 0:
        raise section.error("mu", f"must be >= 0, got {values['mu']}")
    for key in ("alpha_x", "alpha_y"):
        if not 0.0 <= values[key] <= 1.0:
            raise section.error(key, f"must lie in [0, 1], got {values[key]}")
    return ImpulseParams(**values)


def _sim_config(section: _Section, params: ImpulseParams) -> SimConfig:
    x0 = section.number("x0")
    y0 = section.number("y0")
    t_end = section.number("t_end")
    for key, value in (("x0", x0), ("y0", y0)):
        if value is not None and value < 0:
            raise section.error(key, f"must be >= 0, got {value}")
    if t_end is not None and not t_end > 0:
        raise section.error("t_end", f"must be > 0, got {t_end}")
    dt = section.number("dt")
    if dt is not None and not 0 < dt <= min(params.T_h, params.T_r) / 10:
        raise section.error("dt", f"must lie in (0, min(T_h, T_r)/10], got {dt}")
    threshold = section.number("extinction_threshold", 1e-6)
    if not threshold > 0:
        raise section.error("extinction_threshold", f"must be > 0, got {threshold}")
    hold = section.number("extinction_hold")
    if hold is not None and hold < 0:
        raise section.error("extinction_hold", f"must be >= 0, got {hold}")
    return SimConfig(
        x0=x0, y0=y0, t_end=t_end, dt=dt,
        record_every=section.integer("record_every", 1),
        extinction_threshold=threshold,
        extinction_hold=hold,
    )


def _sweep_config(section: _Section) -> SweepConfig:
    k_max = section.integer("k_max", DEFAULT_K_MAX)
    ratios = section.data.get("ratios", DEFAULT_RATIOS)
    if not isinstance(ratios, (list, tuple)) or not ratios:
        raise section.error("ratios", "expected a non-empty list")
    for value in ratios:
        try:
            parse_ratio(value, k_max)
        except RegimeError as exc:
            raise section.error("ratios", str(exc)) from None
    return SweepConfig(ratios=tuple(ratios), k_max=k_max)


def _output_config(section: _Section) -> OutputConfig:
    return OutputConfig(
        directory=section.text("directory", "output"),
        samples=section.integer("samples", 200, minimum=2),
    )


# ── Entry point ────────────────────────────────────────────────────

def load_config(path: str | Path = CONFIG_PATH) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {exc}", None, mark.line + 1 if mark else None) from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping of sections")

    lines = _node_lines(root)
    for name in raw:
        if name not in SCHEMA:
            raise ConfigError(f"unknown key {name}", str(name), lines.get(str(name)))
    if "params" not in raw:
        raise ConfigError("missing key params.d", "params.d")
    if "model" not in raw:
        raise ConfigError("missing key model.family", "model.family")

    sections = {name: _section(raw, name, lines) for name in SCHEMA}
    params = _params(sections["params"])
    config = RunConfig(
        model=_model_config(sections["model"]),
        params=params,
        sim=_sim_config(sections["sim"], params),
        sweep=_sweep_config(sections["sweep"]),
        output=_output_config(sections["output"]),
        source=str(path),
        lines=lines,
    )
    logger.info(f"[CONFIG] Loaded {path} (family={config.model.family}, regime={params.regime})")
    return config
