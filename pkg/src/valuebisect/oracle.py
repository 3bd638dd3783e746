"""Solvability oracles: is the level c reached by f somewhere on [a, b]?

The question is answered as reachability, ``exists x: f(x) >= c``. For
levels between an attained value and the maximum this is the same as
solvability of ``f(x) = c`` (intermediate values), and unlike exact
solvability it can be certified in floating point by a single evaluation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _backend
from .errors import BracketError, EvaluationError
from .expr import Expr, evaluate
from .interval import Interval, eval_interval
from .tape import compile_expr

WITNESS_SLACK_ULPS = 4


class Verdict(str, enum.Enum):
    REACHABLE = "reachable"
    UNREACHABLE = "unreachable"
    UNKNOWN = "unknown"


class UnknownPolicy(str, enum.Enum):
    TREAT_AS_UNREACHABLE = "treat-unreachable"
    ABORT = "abort"


class OracleKind(str, enum.Enum):
    GRID = "grid"
    CERTIFIED = "certified"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class OracleVerdict:
    kind: Verdict
    witness: float | None = None
    certified: bool = False

    def __post_init__(self):
        if (self.kind is Verdict.REACHABLE) != (self.witness is not None):
            raise ValueError("a witness is present exactly when the level is reachable")
        if self.kind is Verdict.UNKNOWN and self.certified:
            raise ValueError("an unknown verdict cannot be certified")

    @property
    def reachable(self) -> bool:
        return self.kind is Verdict.REACHABLE


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 1025
    max_depth: int = 40
    min_box_width: float | None = None  # None: 1e-12 times the domain width
    unknown_policy: UnknownPolicy = UnknownPolicy.TREAT_AS_UNREACHABLE
    kind: OracleKind = OracleKind.HYBRID
    # safety valve on the branch-and-bound work set
    max_boxes: int = 1_000_000

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.max_boxes < 1:
            raise ValueError("max_boxes must be positive")
        object.__setattr__(self, "unknown_policy", UnknownPolicy(self.unknown_policy))
        object.__setattr__(self, "kind", OracleKind(self.kind))


@dataclass(frozen=True)
class ValueBracket:
    """Pair ``(m, u)`` with m an attained value of f and u an upper bound."""

    m: float
    u: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.u)):
            raise BracketError(f"bracket endpoints must be finite, got ({self.m}, {self.u})")
        if self.u < self.m:
            raise BracketError(f"bracket upper end {self.u} is below lower end {self.m}")

    @property
    def width(self) -> float:
        return self.u - self.m

    @property
    def midpoint(self) -> float:
        s = self.m + self.u
        if math.isinf(s):
            return 0.5 * self.m + 0.5 * self.u
        return 0.5 * s

    def __iter__(self):
        yield self.m
        yield self.u


def witness_slack(c: float) -> float:
    return WITNESS_SLACK_ULPS * math.ulp(c)


def _check_domain(domain: Interval):
    if not (domain.lo < domain.hi):
        raise ValueError(f"domain must satisfy a < b, got [{domain.lo}, {domain.hi}]")
    if not (math.isfinite(domain.lo) and math.isfinite(domain.hi)):
        raise ValueError("domain must be bounded")


def decide_reachable_grid(f: Expr, domain: Interval, c: float, cfg: OracleConfig = OracleConfig()) -> OracleVerdict:
    """Sample ``grid_points`` equally spaced points, endpoints included.

    Any sample at or above c proves reachability (leftmost one is the
    witness). Finding none proves nothing, so that verdict is uncertified.
    """
    _check_domain(domain)
    status, x = _backend.kernel().grid_first(compile_expr(f), domain.lo, domain.hi, cfg.grid_points, c)
    if status == 1:
        return OracleVerdict(Verdict.REACHABLE, x, True)
    if status == 0:
        return OracleVerdict(Verdict.UNREACHABLE, None, False)
    return OracleVerdict(Verdict.UNKNOWN)


def decide_reachable_certified(
    f: Expr, domain: Interval, c: float, cfg: OracleConfig = OracleConfig()
) -> OracleVerdict:
    """Interval branch and bound, left box first.

    A box is discarded when its enclosure lies below c; a box whose midpoint
    reaches c ends the search with that midpoint as witness. If every box is
    discarded the level is certified unreachable; if some box hits the depth
    or width limit without resolving, the answer is unknown.
    """
    _check_domain(domain)
    min_width = cfg.min_box_width if cfg.min_box_width is not None else 1e-12 * (domain.hi - domain.lo)
    status, x, _ = _backend.kernel().bnb(
        compile_expr(f), domain.lo, domain.hi, c, cfg.max_depth, min_width, cfg.max_boxes
    )
    if status == 1:
        return OracleVerdict(Verdict.REACHABLE, x, True)
    if status == 0:
        return OracleVerdict(Verdict.UNREACHABLE, None, True)
    return OracleVerdict(Verdict.UNKNOWN)


def decide_reachable(f: Expr, domain: Interval, c: float, cfg: OracleConfig = OracleConfig()) -> OracleVerdict:
    """Dispatch on ``cfg.kind``. The hybrid oracle asks branch and bound
    first and consults the grid only when that comes back unknown."""
    if cfg.kind is OracleKind.GRID:
        return decide_reachable_grid(f, domain, c, cfg)
    verdict = decide_reachable_certified(f, domain, c, cfg)
    if cfg.kind is OracleKind.CERTIFIED or verdict.kind is not Verdict.UNKNOWN:
        return verdict
    fallback = decide_reachable_grid(f, domain, c, cfg)
    if fallback.reachable:
        return fallback
    return verdict


def upper_bound(f: Expr, domain: Interval) -> float:
    enc = eval_interval(f, domain)
    if enc.is_empty:
        raise EvaluationError(f"f is undefined everywhere on [{domain.lo}, {domain.hi}]")
    if not math.isfinite(enc.hi):
        raise EvaluationError(
            "no finite upper bound from interval evaluation on the whole domain; pass an explicit bracket"
        )
    return enc.hi


def grid_maximum(f: Expr, domain: Interval, cfg: OracleConfig = OracleConfig()) -> tuple[float, float]:
    """(largest sampled value, leftmost point attaining it)."""
    _check_domain(domain)
    best, x, count = _backend.kernel().grid_max(compile_expr(f), domain.lo, domain.hi, cfg.grid_points)
    if count == 0:
        raise EvaluationError(f"f has no finite value at any of the {cfg.grid_points} sample points")
    return best, x


def initial_bracket(f: Expr, domain: Interval, cfg: OracleConfig = OracleConfig()) -> ValueBracket:
    """``m0`` is the best grid sample (attained), ``u0`` the enclosure's upper end."""
    m0, _ = grid_maximum(f, domain, cfg)
    return ValueBracket(m0, upper_bound(f, domain))


def dyadic_bracket(bracket: ValueBracket, bits: int = 4) -> ValueBracket:
    """Widen ``bracket`` outward onto multiples of a power of two q.

    q is the largest power of two with ``q <= width / 2**(bits - 1)``, so the
    width grows by at most ``2 q``. Both ends and the width then sit on the
    grid of q, which makes every later midpoint exactly representable and
    every halving exact until the width reaches the spacing of floats near
    the ends. Lowering m keeps it reachable and raising u keeps it an upper
    bound, so the widened pair is still a valid bracket.
    """
    w = bracket.u - bracket.m
    if not (w > 0 and math.isfinite(w)):
        return bracket
    _, e = math.frexp(w)  # 2**(e-1) <= w < 2**e
    q = math.ldexp(1.0, e - bits)
    m = math.floor(bracket.m / q) * q
    u = math.ceil(bracket.u / q) * q
    if not (math.isfinite(m) and math.isfinite(u) and m <= bracket.m and u >= bracket.u):
        return bracket
    return ValueBracket(m, u)


def endpoint_bracket(f: Expr, domain: Interval) -> ValueBracket:
    """``m0 = min(f(a), f(b))`` with the same guaranteed ``u0``."""
    _check_domain(domain)
    fa, fb = evaluate(f, domain.lo), evaluate(f, domain.hi)
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise EvaluationError("f is not finite at both ends of the domain")
    return ValueBracket(min(fa, fb), upper_bound(f, domain))
