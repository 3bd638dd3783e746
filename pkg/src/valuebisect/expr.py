"""Abstract syntax tree for univariate real functions.

Nodes are frozen dataclasses, so an expression can be shared freely, hashed,
and compared structurally. Point evaluation never raises: an undefined
result (log of a non-positive number, division by zero, ...) comes back as
NaN and overflow comes back as an infinity. Use :func:`is_domain_error` to
tell the two apart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from . import _scalar

UNARY_OPS = ("neg", "sin", "cos", "tan", "exp", "log", "sqrt", "abs")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
COMPARATORS = ("<", "<=", ">", ">=")

_BINARY_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


@dataclass(frozen=True)
class Const:
    value: float

    def eval(self, x: float) -> float:
        return self.value


@dataclass(frozen=True)
class Var:
    def eval(self, x: float) -> float:
        return x


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary operator {self.op!r}")

    def eval(self, x: float) -> float:
        return _scalar.UNARY[self.op](self.child.eval(x))


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary operator {self.op!r}")

    def eval(self, x: float) -> float:
        return _scalar.BINARY[self.op](self.left.eval(x), self.right.eval(x))


@dataclass(frozen=True)
class Condition:
    """Conjunction of simple bounds ``x <cmp> bound``; empty means always true."""

    bounds: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        for cmp, _ in self.bounds:
            if cmp not in COMPARATORS:
                raise ValueError(f"unknown comparator {cmp!r}")

    def holds(self, x: float) -> bool:
        for cmp, b in self.bounds:
            if cmp == "<":
                ok = x < b
            elif cmp == "<=":
                ok = x <= b
            elif cmp == ">":
                ok = x > b
            else:
                ok = x >= b
            if not ok:
                return False
        return True

    def as_interval(self) -> tuple[float, bool, float, bool]:
        """The solution set as ``(lo, lo_closed, hi, hi_closed)``.

        The set may be empty (``lo > hi``, or ``lo == hi`` with an open end).
        """
        lo, lo_closed = -math.inf, False
        hi, hi_closed = math.inf, False
        for cmp, b in self.bounds:
            if cmp in ("<", "<="):
                closed = cmp == "<="
                if b < hi:
                    hi, hi_closed = b, closed
                elif b == hi:
                    hi_closed = hi_closed and closed
            else:
                closed = cmp == ">="
                if b > lo:
                    lo, lo_closed = b, closed
                elif b == lo:
                    lo_closed = lo_closed and closed
        return lo, lo_closed, hi, hi_closed


@dataclass(frozen=True)
class Piecewise:
    branches: tuple[tuple[Condition, "Expr"], ...]
    default: "Expr"

    def select(self, x: float) -> "Expr":
        for cond, body in self.branches:
            if cond.holds(x):
                return body
        return self.default

    def eval(self, x: float) -> float:
        return self.select(x).eval(x)


Expr = Union[Const, Var, Unary, Binary, Piecewise]

X = Var()


def evaluate(f: Expr, x: float) -> float:
    """f(x) in IEEE double precision; NaN marks a domain error."""
    return f.eval(float(x))


def is_domain_error(value: float) -> bool:
    return value != value


def negate(f: Expr) -> Expr:
    return Unary("neg", f)


def walk(f: Expr):
    """Yield every node of ``f`` in pre-order."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Unary):
            stack.append(node.child)
        elif isinstance(node, Binary):
            stack.extend((node.right, node.left))
        elif isinstance(node, Piecewise):
            stack.append(node.default)
            stack.extend(body for _, body in reversed(node.branches))


def _num(v: float) -> str:
    return repr(float(v))


def to_text(f: Expr) -> str:
    """Render ``f`` in the input grammar; parsing the result gives back ``f``.

    Binary nodes are fully parenthesised. Negative constants are not
    produced by the parser, so they print as a negation of their magnitude
    and round-trip to ``Unary('neg', ...)`` instead. A branch with an empty
    (always-true) condition cannot be written in the grammar and raises
    ``ValueError``.
    """
    if isinstance(f, Const):
        if f.value < 0 or (f.value == 0 and math.copysign(1.0, f.value) < 0):
            return f"(-{_num(-f.value)})"
        return _num(f.value)
    if isinstance(f, Var):
        return "x"
    if isinstance(f, Unary):
        if f.op == "neg":
            return f"(-{to_text(f.child)})"
        return f"{f.op}({to_text(f.child)})"
    if isinstance(f, Binary):
        return f"({to_text(f.left)} {_BINARY_SYMBOL[f.op]} {to_text(f.right)})"
    if isinstance(f, Piecewise):
        parts = []
        for cond, body in f.branches:
            if not cond.bounds:
                raise ValueError("an always-true condition has no textual form")
            bounds = " & ".join(f"x {cmp} {_num(b)}" for cmp, b in cond.bounds)
            parts.append(f"{bounds}: {to_text(body)}")
        parts.append(f"else: {to_text(f.default)}")
        return "piecewise(" + "; ".join(parts) + ")"
    raise TypeError(f"not an expression node: {f!r}")
