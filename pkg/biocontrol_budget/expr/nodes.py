"""
Expression AST nodes.
=====================
Immutable node types. Structural equality comes from the dataclasses, which
is what the round-trip checks compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

BinaryOperator = Literal["+", "-", "*", "/", "^"]

# name -> arity
FUNCTIONS: dict[str, int] = {
    "exp": 1,
    "ln": 1,
    "sqrt": 1,
    "abs": 1,
    "min": 2,
    "max": 2,
}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    operand: ExprAst


@dataclass(frozen=True)
class BinOp:
    op: BinaryOperator
    left: ExprAst
    right: ExprAst


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[ExprAst, ...]

    def __post_init__(self):
        arity = FUNCTIONS.get(self.name)
        if arity is None:
            raise ValueError(f"unknown function '{self.name}'")
        if len(self.args) != arity:
            raise ValueError(f"{self.name} takes {arity} argument(s), got {len(self.args)}")


ExprAst = Union[Const, Var, Neg, BinOp, Call]
