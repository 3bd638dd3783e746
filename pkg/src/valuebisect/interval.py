"""Closed real intervals and guaranteed range enclosures of expressions."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from ._intervalops import mid as _mid
from .expr import Expr
from .tape import compile_expr

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``.

    The only interval with ``lo > hi`` allowed is the empty one,
    ``Interval(inf, -inf)``.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi and not (self.lo == INF and self.hi == -INF):
            raise ValueError(f"interval lower end {self.lo} exceeds upper end {self.hi}")

    @classmethod
    def empty(cls) -> "Interval":
        return cls(INF, -INF)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.is_empty else self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return self.is_empty or (other.lo <= self.lo and self.hi <= other.hi)

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = midpoint(self)
        return Interval(self.lo, m), Interval(m, self.hi)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class Enclosure(Interval):
    """Range enclosure; ``partial`` means f is undefined somewhere on the box."""

    partial: bool = False

    @property
    def is_whole_line(self) -> bool:
        return self.lo == -INF and self.hi == INF


def midpoint(X: Interval) -> float:
    """Midpoint of a finite interval; ``(lo + hi) / 2`` with an overflow-safe fallback."""
    if not (math.isfinite(X.lo) and math.isfinite(X.hi)):
        raise ValueError("midpoint of an unbounded interval")
    return _mid(X.lo, X.hi)


def eval_interval(f: Expr, X: Interval) -> Enclosure:
    """Interval containing every defined value of f on X.

    Rounded endpoints are widened outward by one ulp. Division by an
    interval that contains zero gives the whole line with ``partial`` set;
    log, sqrt and fractional powers are clipped to the part of X where they
    are defined (still sound) and also set ``partial``. An empty enclosure
    means f is defined nowhere on X.
    """
    if X.is_empty:
        return Enclosure(INF, -INF)
    lo, hi, partial = _backend.kernel().eval_interval(compile_expr(f), X.lo, X.hi)
    return Enclosure(lo, hi, partial)
