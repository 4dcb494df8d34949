"""Verification suite: closed forms against independent oracles."""

from .checks import CheckResult, run_all

__all__ = ["CheckResult", "run_all"]
