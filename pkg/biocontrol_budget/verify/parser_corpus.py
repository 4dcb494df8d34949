"""
Expression corpus and precedence oracle.
========================================
CORPUS holds expressions that must survive parse → to_source → parse unchanged.

The precedence oracle draws random flat constant expressions (no parentheses),
lets Python's own parser decide the grouping (same precedence rules once ^ is
read as **), renders that grouping fully parenthesized and evaluates it with our
evaluator. Both values must agree with parsing the flat text directly.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ExprDomainError
from ..expr import evaluate, parse, to_source

CORPUS: tuple[str, ...] = (
    "x",
    "2",
    "-3",
    "1 - exp(-2*x)",
    "x/(1+x)",
    "x*(1 - x/10)",
    "2^3^2",
    "(2^3)^2",
    "-x^2",
    "(-x)^2",
    "x^-1",
    "2^-x",
    "1/(1/x)",
    "x - (x - 1)",
    "x - x - 1",
    "x / x / 2",
    "x / (x / 2)",
    "-(-x)",
    "--x",
    "sqrt(x) * ln(1 + x)",
    "abs(x - 3) + min(x, 2) * max(1, x)",
    "min(max(x, 0.5), 4)",
    "exp(-x^2 / 2)",
    "1.5e-3 * x",
    "2.5E+2 - x",
    "x * exp(1 - x)",
    "x^2 / (1 + x^2)",
    "0.8 * x / (1 + 0.8 * 0.25 * x)",
    "(1 + x) ^ (1 / 3)",
    "-(x + 1) * (x - 1)",
    "x - -2",
    "(-2)^x",
    "3 * -x",
    "ln(exp(x)) - x + 1",
    "  x   +\t1  ",
)

_ATOMS = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "0.5")
_OPERATORS = ("+", "-", "*", "/", "^")


# ── Python-side oracle ─────────────────────────────────────────────

_PY_BINOPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.Pow: "^"}


def fully_parenthesized(text: str) -> str:
    """Group `text` with Python's grammar (^ read as **) and parenthesize every operation."""

    def render(node) -> str:
        if isinstance(node, ast.Constant):
            return repr(float(node.value))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return f"(-{render(node.operand)})"
        if isinstance(node, ast.BinOp) and type(node.op) in _PY_BINOPS:
            return f"({render(node.left)} {_PY_BINOPS[type(node.op)]} {render(node.right)})"
        raise ValueError(f"unsupported construct {ast.dump(node)}")

    return render(ast.parse(text.replace("^", "**"), mode="eval").body)


def python_value(text: str) -> float:
    """Evaluate the flat constant expression with Python float arithmetic."""

    def walk(node) -> float:
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        left, right = walk(node.left), walk(node.right)
        op = type(node.op)
        if op is ast.Add:
            return left + right
        if op is ast.Sub:
            return left - right
        if op is ast.Mult:
            return left * right
        if op is ast.Div:
            return left / right
        return math.pow(left, right)

    return walk(ast.parse(text.replace("^", "**"), mode="eval").body)


def random_constant_expression(rng: np.random.Generator, max_operands: int = 6) -> str:
    n = int(rng.integers(2, max_operands + 1))
    parts = []
    for i in range(n):
        atom = _ATOMS[int(rng.integers(len(_ATOMS)))]
        if rng.random() < 0.25:
            atom = "-" + atom
        parts.append(atom)
        if i < n - 1:
            # ^ is drawn less often to keep magnitudes small
            op = _OPERATORS[int(rng.choice(5, p=[0.25, 0.25, 0.2, 0.2, 0.1]))]
            parts.append(op)
    return " ".join(parts)


# ── Suites ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SuiteResult:
    passed: bool
    count: int
    failures: tuple[str, ...]


def round_trip_suite(corpus=CORPUS) -> SuiteResult:
    failures = []
    for source in corpus:
        tree = parse(source)
        printed = to_source(tree)
        if parse(printed) != tree:
            failures.append(f"{source!r} -> {printed!r}")
    return SuiteResult(not failures, len(corpus), tuple(failures))


def precedence_suite(rng: np.random.Generator, count: int = 200) -> SuiteResult:
    failures = []
    checked = 0
    while checked < count:
        text = random_constant_expression(rng)
        try:
            expected = python_value(text)
            ours = evaluate(parse(text), 0.0)
            grouped = evaluate(parse(fully_parenthesized(text)), 0.0)
        except (ExprDomainError, ZeroDivisionError, ValueError, OverflowError):
            continue
        if not math.isfinite(expected):
            continue
        checked += 1
        scale = max(1.0, abs(expected))
        if abs(ours - expected) > 1e-12 * scale or abs(grouped - expected) > 1e-12 * scale:
            failures.append(f"{text!r}: ours={ours!r} grouped={grouped!r} python={expected!r}")
    return SuiteResult(not failures, count, tuple(failures))
