"""
Tests for the expression parser and evaluator.
==============================================
Grammar, precedence, error offsets, domain errors and the round-trip corpus.

Run: python -m pytest biocontrol_budget/tests/test_expr.py -v
"""

import math

import numpy as np
import pytest

from biocontrol_budget.errors import ExprDomainError, ExprSyntaxError
from biocontrol_budget.expr import BinOp, Call, Const, ExprFunction, Neg, Var, evaluate, parse, to_source
from biocontrol_budget.verify.parser_corpus import (
    CORPUS,
    fully_parenthesized,
    precedence_suite,
    round_trip_suite,
)


def _value(source: str, x: float = 0.0) -> float:
    return evaluate(parse(source), x)


# ── Grammar ──────────────────────────────────────────────────────

def test_variable():
    assert parse("x") == Var()


def test_exp_of_negated_product():
    expected = BinOp("-", Const(1.0), Call("exp", (BinOp("*", Const(-2.0), Var()),)))
    assert parse("1 - exp(-2*x)") == expected


def test_whitespace_insensitive():
    assert parse(" x /( 1+x ) ") == parse("x/(1+x)")


def test_power_is_right_associative():
    assert _value("2^3^2") == 512.0
    assert _value("(2^3)^2") == 64.0


def test_power_binds_tighter_than_unary_minus():
    assert _value("-2^2") == -4.0
    assert _value("(-2)^2") == 4.0


def test_negative_exponent():
    assert _value("2^-1") == 0.5
    assert parse("x^-1") == BinOp("^", Var(), Const(-1.0))


def test_unary_minus_binds_tighter_than_product():
    assert parse("-x*2") == BinOp("*", Neg(Var()), Const(2.0))


def test_left_associative_subtraction_and_division():
    assert _value("10 - 4 - 3") == 3.0
    assert _value("16 / 4 / 2") == 2.0


def test_exponent_notation():
    assert _value("1.5e-3") == pytest.approx(0.0015)
    assert _value("2.5E+2") == 250.0


# ── Evaluation ───────────────────────────────────────────────────

def test_eval_identity():
    assert _value("x", 3.5) == 3.5


def test_eval_ratio():
    assert _value("x/(1+x)", 1.0) == 0.5


def test_eval_exp():
    assert _value("exp(-1)") == pytest.approx(0.36787944117144233, rel=1e-15)


def test_functions():
    assert _value("sqrt(x)", 9.0) == 3.0
    assert _value("ln(x)", math.e) == pytest.approx(1.0)
    assert _value("abs(x)", -2.5) == 2.5
    assert _value("min(x, 2)", 5.0) == 2.0
    assert _value("max(x, 2)", 5.0) == 5.0


def test_expr_function_callable():
    fn = ExprFunction("x*(1 - x/10)")
    assert fn(5.0) == pytest.approx(2.5)
    assert "x*(1 - x/10)" in repr(fn)


# ── Domain errors ────────────────────────────────────────────────

@pytest.mark.parametrize("source,x", [
    ("ln(x)", 0.0),
    ("ln(x)", -1.0),
    ("1/x", 0.0),
    ("x^-1", 0.0),
    ("sqrt(x)", -1.0),
    ("exp(x)", 1000.0),
    ("x^0.5", -4.0),
])
def test_domain_errors(source, x):
    with pytest.raises(ExprDomainError):
        evaluate(parse(source), x)


# ── Syntax errors ────────────────────────────────────────────────

@pytest.mark.parametrize("source", ["1 +", "(x", "x)", "2 x", "*x", "exp x", ""])
def test_syntax_errors_report_offset_within_source(source):
    with pytest.raises(ExprSyntaxError) as info:
        parse(source)
    assert 0 <= info.value.offset <= len(source.encode("utf-8"))


def test_unknown_identifier():
    with pytest.raises(ExprSyntaxError, match="unknown identifier 'y'") as info:
        parse("x + y")
    assert info.value.offset == 4


@pytest.mark.parametrize("source", ["min(x)", "exp(x, 1)", "max(1, 2, 3)"])
def test_arity_mismatch(source):
    with pytest.raises(ExprSyntaxError, match="argument"):
        parse(source)


def test_offset_counts_bytes():
    # 'ü' takes two bytes, so '$' sits at byte 5 although it is character 4
    with pytest.raises(ExprSyntaxError) as info:
        parse("ü + $")
    assert info.value.offset == 5


def test_expected_token_described():
    with pytest.raises(ExprSyntaxError) as info:
        parse("(x + 1")
    assert info.value.expected == "')'"


# ── Round trip and precedence oracle ─────────────────────────────

def test_corpus_has_at_least_30_expressions():
    assert len(CORPUS) >= 30


def test_corpus_round_trip():
    result = round_trip_suite()
    assert result.passed, result.failures


@pytest.mark.parametrize("source,printed", [
    ("2^3^2", "2^3^2"),
    ("(2^3)^2", "(2^3)^2"),
    ("-(x + 1)", "-(x + 1)"),
    ("x - (x - 1)", "x - (x - 1)"),
    ("(-2)^x", "(-2)^x"),
])
def test_minimal_parentheses(source, printed):
    assert to_source(parse(source)) == printed


def test_fully_parenthesized_grouping():
    assert fully_parenthesized("1 + 2 * 3") == "(1.0 + (2.0 * 3.0))"
    assert fully_parenthesized("-2 ^ 2") == "(-(2.0 ^ 2.0))"


def test_precedence_oracle_agrees():
    result = precedence_suite(np.random.default_rng(11), count=200)
    assert result.passed, result.failures
