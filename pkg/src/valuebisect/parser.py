"""Recursive-descent parser for the function-input grammar.

::

    expr      := term (("+"|"-") term)*
    term      := factor (("*"|"/") factor)*
    factor    := "-" factor | power
    power     := atom ("^" factor)?
    atom      := NUMBER | "x" | "pi" | FUNC "(" expr ")" | "(" expr ")" | piecewise
    piecewise := "piecewise" "(" branch (";" branch)* ";" "else" ":" expr ")"
    branch    := cond ":" expr
    cond      := bound ("&" bound)*
    bound     := SNUMBER ("<"|"<=") "x" | "x" ("<"|"<="|">"|">=") SNUMBER

``SNUMBER`` is a number with an optional leading minus sign. ``^`` binds
tighter than unary minus and is right-associative, so ``-x^2`` is
``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.
"""
from __future__ import annotations

import math
import re

from .errors import ParseError, UnknownIdentifierError
from .expr import Binary, Condition, Const, Expr, Piecewise, Unary, X

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|[-+*/^():;&<>])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _offset(text, pos), "a token")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _offset(text: str, pos: int) -> int:
    # character index -> byte offset
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, expected: str):
        kind, value, pos = self.tok
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected {expected}, found {found}", _offset(self.text, pos), expected)

    def accept(self, value: str) -> bool:
        if self.tok[0] in ("op", "name") and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.error(repr(value))

    def number(self) -> float:
        kind, value, pos = self.tok
        if kind != "num":
            self.error("a number")
        v = float(value)
        if not math.isfinite(v):
            raise ParseError(f"number {value} out of range", _offset(self.text, pos), "a finite number")
        self.i += 1
        return v

    def signed_number(self) -> float:
        if self.accept("-"):
            return -self.number()
        return self.number()

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok[0] != "end":
            self.error("an operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Binary("add", node, self.term())
            elif self.accept("-"):
                node = Binary("sub", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Binary("mul", node, self.factor())
            elif self.accept("/"):
                node = Binary("div", node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        if self.accept("-"):
            return Unary("neg", self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return Binary("pow", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, value, pos = self.tok
        if kind == "num":
            return Const(self.number())
        if kind == "name":
            self.i += 1
            if value == "x":
                return X
            if value == "pi":
                return Const(math.pi)
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            if value == "piecewise":
                return self.piecewise()
            raise UnknownIdentifierError(value, _offset(self.text, pos))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("a number, 'x', a function call or '('")

    def piecewise(self) -> Expr:
        self.expect("(")
        branches = []
        while True:
            if self.accept("else"):
                if not branches:
                    self.error("a condition before 'else'")
                self.expect(":")
                default = self.expr()
                self.expect(")")
                return Piecewise(tuple(branches), default)
            cond = self.condition()
            self.expect(":")
            body = self.expr()
            branches.append((cond, body))
            self.expect(";")

    def condition(self) -> Condition:
        bounds = [self.bound()]
        while self.accept("&"):
            bounds.append(self.bound())
        return Condition(tuple(bounds))

    def bound(self) -> tuple[str, float]:
        if self.accept("x"):
            kind, value, _ = self.tok
            if kind != "op" or value not in ("<", "<=", ">", ">="):
                self.error("a comparison operator")
            self.i += 1
            return value, self.signed_number()
        v = self.signed_number()
        kind, value, _ = self.tok
        if kind != "op" or value not in ("<", "<="):
            self.error("'<' or '<='")
        self.i += 1
        self.expect("x")
        # b < x  is  x > b
        return (">" if value == "<" else ">="), v


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises :class:`ParseError` (with ``offset`` and ``expected``) on
    malformed input and :class:`UnknownIdentifierError` on names other than
    ``x``, ``pi``, the supported functions and ``piecewise``.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0, "an expression")
    return _Parser(text).parse()
