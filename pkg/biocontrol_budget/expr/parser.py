"""
Expression parser — recursive descent over a fixed arithmetic grammar.
======================================================================

Grammar (whitespace insensitive):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?          # right-associative
    primary := number | 'x' | func '(' expr (',' expr)* ')' | '(' expr ')'

Precedence: ^ > unary minus > * / > + -. So -2^2 = -4, 2^3^2 = 512 and 2^-1 = 0.5.
A minus applied directly to a number is folded into the constant.

Usage:
    ast = parse("x/(1+x)")
    evaluate(ast, 1.0)        # 0.5
    to_source(ast)            # "x / (1 + x)"
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ExprDomainError, ExprSyntaxError
from .nodes import FUNCTIONS, BinOp, Call, Const, ExprAst, Neg, Var

_OPERATORS = "+-*/^"


# ── Tokenizer ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Token:
    kind: str      # NUM, IDENT, OP, LPAREN, RPAREN, COMMA, EOF
    text: str
    pos: int       # character index


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(_Token("NUM", source[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(_Token("IDENT", source[start:i], start))
            continue
        if ch in _OPERATORS:
            tokens.append(_Token("OP", ch, i))
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
        elif ch == ",":
            tokens.append(_Token("COMMA", ch, i))
        else:
            raise ExprSyntaxError(
                f"unexpected character {ch!r}",
                _byte_offset(source, i),
                "number, x, function, operator or parenthesis",
            )
        i += 1
    tokens.append(_Token("EOF", "", n))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


# ── Parser ─────────────────────────────────────────────────────────

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, expected: str, token: _Token | None = None) -> ExprSyntaxError:
        token = token or self.current
        return ExprSyntaxError(message, _byte_offset(self.source, token.pos), expected)

    def _is_op(self, ops: str) -> bool:
        return self.current.kind == "OP" and self.current.text in ops

    def parse(self) -> ExprAst:
        node = self._expr()
        if self.current.kind != "EOF":
            raise self._error(f"unexpected {self.current.text!r}", "operator or end of input")
        return node

    def _expr(self) -> ExprAst:
        node = self._term()
        while self._is_op("+-"):
            op = self._advance().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> ExprAst:
        node = self._unary()
        while self._is_op("*/"):
            op = self._advance().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> ExprAst:
        if self._is_op("-"):
            self._advance()
            operand = self._unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        return self._power()

    def _power(self) -> ExprAst:
        base = self._primary()
        if self._is_op("^"):
            self._advance()
            return BinOp("^", base, self._unary())
        return base

    def _primary(self) -> ExprAst:
        token = self.current
        if token.kind == "NUM":
            self._advance()
            value = float(token.text)
            if math.isinf(value):
                raise self._error(f"number {token.text} out of range", "finite number", token)
            return Const(value)
        if token.kind == "IDENT":
            self._advance()
            if token.text == "x":
                return Var()
            if token.text not in FUNCTIONS:
                raise self._error(
                    f"unknown identifier {token.text!r}",
                    "x or one of " + ", ".join(sorted(FUNCTIONS)),
                    token,
                )
            return self._call(token)
        if token.kind == "LPAREN":
            self._advance()
            node = self._expr()
            if self.current.kind != "RPAREN":
                raise self._error("unbalanced parenthesis", "')'")
            self._advance()
            return node
        if token.kind == "EOF":
            raise self._error("unexpected end of input", "number, x, function or '('")
        raise self._error(f"unexpected {token.text!r}", "number, x, function or '('")

    def _call(self, name_token: _Token) -> Call:
        if self.current.kind != "LPAREN":
            raise self._error(f"function {name_token.text!r} needs an argument list", "'('")
        self._advance()
        args = [self._expr()]
        while self.current.kind == "COMMA":
            self._advance()
            args.append(self._expr())
        if self.current.kind != "RPAREN":
            raise self._error("unterminated argument list", "',' or ')'")
        self._advance()
        arity = FUNCTIONS[name_token.text]
        if len(args) != arity:
            raise self._error(
                f"{name_token.text} takes {arity} argument(s), got {len(args)}",
                f"{arity} argument(s)",
                name_token,
            )
        return Call(name_token.text, tuple(args))


def parse(source: str) -> ExprAst:
    """Parse expression text into an immutable AST. Raises ExprSyntaxError."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, "expression")
    return _Parser(source).parse()


# ── Evaluation ─────────────────────────────────────────────────────

def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise ExprDomainError(f"{what} produced a non-finite value")
    return value


def _power(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0:
        raise ExprDomainError("0 raised to a negative power")
    try:
        return _finite(math.pow(base, exponent), "^")
    except (ValueError, OverflowError) as exc:
        raise ExprDomainError(f"{base!r}^{exponent!r} is outside the real domain") from exc


def _call(name: str, args: list[float]) -> float:
    if name == "exp":
        try:
            return math.exp(args[0])
        except OverflowError as exc:
            raise ExprDomainError(f"exp({args[0]!r}) overflows") from exc
    if name == "ln":
        if args[0] <= 0:
            raise ExprDomainError(f"ln of non-positive argument {args[0]!r}")
        return math.log(args[0])
    if name == "sqrt":
        if args[0] < 0:
            raise ExprDomainError(f"sqrt of negative argument {args[0]!r}")
        return math.sqrt(args[0])
    if name == "abs":
        return abs(args[0])
    if name == "min":
        return min(args)
    return max(args)


def evaluate(node: ExprAst, x: float) -> float:
    """Evaluate at x. Domain violations raise ExprDomainError instead of returning inf/nan."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        if not math.isfinite(x):
            raise ExprDomainError(f"x must be finite, got {x!r}")
        return x
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, BinOp):
        left = evaluate(node.left, x)
        right = evaluate(node.right, x)
        if node.op == "+":
            return _finite(left + right, "+")
        if node.op == "-":
            return _finite(left - right, "-")
        if node.op == "*":
            return _finite(left * right, "*")
        if node.op == "/":
            if right == 0.0:
                raise ExprDomainError("division by zero")
            return _finite(left / right, "/")
        return _power(left, right)
    if isinstance(node, Call):
        return _call(node.name, [evaluate(arg, x) for arg in node.args])
    raise TypeError(f"not an expression node: {node!r}")


# ── Pretty printer ─────────────────────────────────────────────────

_BINARY_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PRECEDENCE = 3
_ATOM_PRECEDENCE = 5


def _precedence(node: ExprAst) -> int:
    if isinstance(node, BinOp):
        return _BINARY_PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return _UNARY_PRECEDENCE
    if isinstance(node, Const) and math.copysign(1.0, node.value) < 0 and node.value != 0:
        return _UNARY_PRECEDENCE
    return _ATOM_PRECEDENCE


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _wrap(node: ExprAst, needs_parens: bool) -> str:
    text = to_source(node)
    return f"({text})" if needs_parens else text


def to_source(node: ExprAst) -> str:
    """Render with the minimal parentheses needed to reparse to the same tree."""
    if isinstance(node, Const):
        return _format_number(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < 4)
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(to_source(a) for a in node.args) + ")"
    prec = _BINARY_PRECEDENCE[node.op]
    if node.op == "^":
        left = _wrap(node.left, _precedence(node.left) != _ATOM_PRECEDENCE)
        right = _wrap(node.right, _precedence(node.right) < _UNARY_PRECEDENCE)
        return f"{left}^{right}"
    left = _wrap(node.left, _precedence(node.left) < prec)
    right = _wrap(node.right, _precedence(node.right) <= prec)
    return f"{left} {node.op} {right}"


# ── Callable wrapper ───────────────────────────────────────────────

class ExprFunction:
    """A parsed expression usable as f(x). Keeps the source for reports."""

    __slots__ = ("source", "ast")

    def __init__(self, source: str):
        self.source = source
        self.ast = parse(source)

    def __call__(self, x: float) -> float:
        return evaluate(self.ast, float(x))

    def __repr__(self) -> str:
        return f"ExprFunction({self.source!r})"
