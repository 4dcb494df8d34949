"""
Error types shared across biocontrol_budget.
"""

from __future__ import annotations


class BiocontrolError(Exception):
    """Base for every error raised by this package."""


class ExprSyntaxError(BiocontrolError, ValueError):
    """Expression text could not be parsed. `offset` is a byte offset into the source."""

    def __init__(self, message: str, offset: int, expected: str = ""):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class ExprDomainError(BiocontrolError, ArithmeticError):
    """Evaluation left the function's domain (ln <= 0, division by zero, ...)."""


class ConfigError(BiocontrolError, ValueError):
    """Run configuration is invalid. Carries the dotted key and 1-based YAML line when known."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


class RegimeError(BiocontrolError, ValueError):
    """Operation called with a schedule it has no formula for."""


class HypothesisError(BiocontrolError, ValueError):
    """Response functions violate the model assumptions."""


class ThresholdError(BiocontrolError, ValueError):
    """Threshold search or threshold formula cannot produce a value."""


class SimulationError(BiocontrolError, RuntimeError):
    """Integration failed. `time` is the instant where the state stopped being finite."""

    def __init__(self, message: str, time: float):
        self.time = time
        super().__init__(f"{message} at t={time:.9g}")
