"""Lift expressions: a tiny recursive-descent parser and a numpy evaluator.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' ['-'] INTEGER]
    atom   := NUMBER | 't' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

Unary minus binds looser than ``^``, so ``-t^2`` is ``-(t^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "LiftError",
    "LiftSyntaxError",
    "UnknownIdentifierError",
    "LiftEvaluationError",
    "Num",
    "Var",
    "Pi",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "LiftExpr",
    "parse_lift",
    "evaluate",
    "substitute",
]


class LiftError(ValueError):
    """Base class for everything that can go wrong with a lift expression."""


class LiftSyntaxError(LiftError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {' or '.join(expected)})"
        super().__init__(detail)


class UnknownIdentifierError(LiftSyntaxError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", position, ("t", "pi", "sin", "cos"))


class LiftEvaluationError(LiftError, ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    def __str__(self) -> str:
        return "t"


@dataclass(frozen=True)
class Pi:
    def __str__(self) -> str:
        return "pi"


@dataclass(frozen=True)
class Neg:
    operand: "LiftExpr"

    def __str__(self) -> str:
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "LiftExpr"
    right: "LiftExpr"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow:
    base: "LiftExpr"
    exponent: int

    def __str__(self) -> str:
        return f"({self.base}^{self.exponent})"


@dataclass(frozen=True)
class Call:
    func: str  # sin or cos
    arg: "LiftExpr"

    def __str__(self) -> str:
        return f"{self.func}({self.arg})"


LiftExpr = Union[Num, Var, Pi, Neg, BinOp, Pow, Call]

_FUNCTIONS = ("sin", "cos")
_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+\.?\d*|\.\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None:
            start = pos + (len(source[pos:]) - len(source[pos:].lstrip()))
            raise LiftSyntaxError(f"unexpected character {source[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def _advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _expect_op(self, op: str) -> None:
        kind, text, pos = self.tok
        if kind != "op" or text != op:
            found = text or "end of input"
            raise LiftSyntaxError(f"unexpected {found!r}", pos, (repr(op),))
        self.i += 1

    def parse(self) -> LiftExpr:
        node = self.expr()
        kind, text, pos = self.tok
        if kind != "end":
            raise LiftSyntaxError(f"unexpected {text!r}", pos, ("operator", "end of input"))
        return node

    def expr(self) -> LiftExpr:
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self._advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> LiftExpr:
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self._advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> LiftExpr:
        if self.tok[0] == "op" and self.tok[1] == "-":
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> LiftExpr:
        base = self.atom()
        if not (self.tok[0] == "op" and self.tok[1] == "^"):
            return base
        self._advance()
        sign = 1
        if self.tok[0] == "op" and self.tok[1] == "-":
            self._advance()
            sign = -1
        kind, text, pos = self.tok
        if kind != "number" or not text.isdigit():
            raise LiftSyntaxError("exponent must be an integer literal", pos, ("integer",))
        self._advance()
        if self.tok[0] == "op" and self.tok[1] == "^":
            raise LiftSyntaxError("chained exponent needs parentheses", self.tok[2])
        return Pow(base, sign * int(text))

    def atom(self) -> LiftExpr:
        kind, text, pos = self.tok
        if kind == "number":
            self._advance()
            return Num(float(text))
        if kind == "ident":
            self._advance()
            if text == "t":
                return Var()
            if text == "pi":
                return Pi()
            if text in _FUNCTIONS:
                self._expect_op("(")
                arg = self.expr()
                self._expect_op(")")
                return Call(text, arg)
            raise UnknownIdentifierError(text, pos)
        if kind == "op" and text == "(":
            self._advance()
            node = self.expr()
            self._expect_op(")")
            return node
        found = text or "end of input"
        raise LiftSyntaxError(f"unexpected {found!r}", pos, ("number", "t", "pi", "function", "'('"))


def parse_lift(source: str) -> LiftExpr:
    """Parse ``source`` into an expression tree over the variable ``t``."""
    return _Parser(source).parse()


def _eval(node: LiftExpr, t):
    if isinstance(node, Var):
        return t
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Pi):
        return math.pi
    if isinstance(node, Neg):
        return -_eval(node.operand, t)
    if isinstance(node, Call):
        fn = np.sin if node.func == "sin" else np.cos
        return fn(_eval(node.arg, t))
    if isinstance(node, Pow):
        base = _eval(node.base, t)
        if node.exponent < 0:
            if np.any(np.asarray(base) == 0):
                raise LiftEvaluationError(f"division by zero in {node}")
            return 1.0 / base ** (-node.exponent)
        return base**node.exponent
    left = _eval(node.left, t)
    right = _eval(node.right, t)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if np.any(np.asarray(right) == 0):
        raise LiftEvaluationError(f"division by zero in {node}")
    return left / right


def evaluate(node: LiftExpr, t):
    """Evaluate ``node`` at ``t`` (scalar or array); result has the shape of ``t``."""
    arr = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, arr)
    out = np.asarray(out, dtype=float) + np.zeros_like(arr)
    if not np.all(np.isfinite(out)):
        raise LiftEvaluationError(f"non-finite value while evaluating {node}")
    return float(out) if out.ndim == 0 else out


def substitute(node: LiftExpr, inner: LiftExpr) -> LiftExpr:
    """Replace every occurrence of ``t`` in ``node`` by ``inner``."""
    if isinstance(node, Var):
        return inner
    if isinstance(node, (Num, Pi)):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, inner))
    if isinstance(node, Call):
        return Call(node.func, substitute(node.arg, inner))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, inner), node.exponent)
    return BinOp(node.op, substitute(node.left, inner), substitute(node.right, inner))

