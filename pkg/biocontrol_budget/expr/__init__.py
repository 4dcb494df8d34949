"""Univariate expressions in x for configurable f, g, h."""

from .nodes import BinOp, Call, Const, ExprAst, FUNCTIONS, Neg, Var
from .parser import ExprFunction, evaluate, parse, to_source

__all__ = [
    "BinOp", "Call", "Const", "ExprAst", "FUNCTIONS", "Neg", "Var",
    "ExprFunction", "evaluate", "parse", "to_source",
]
