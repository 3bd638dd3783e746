"""Point semantics of every primitive operation.

These are the reference definitions. The compiled kernel reproduces them
with the C math library, which is what :mod:`math` calls underneath, so both
paths agree bit for bit. Undefined results (domain errors) are NaN; overflow
is +-inf.
"""
import math

NAN = math.nan
INF = math.inf


def neg(x: float) -> float:
    return -x


def add(x: float, y: float) -> float:
    return x + y


def sub(x: float, y: float) -> float:
    return x - y


def mul(x: float, y: float) -> float:
    return x * y


def div(x: float, y: float) -> float:
    if y == 0.0 or y != y:
        return NAN
    return x / y


def _is_integer(y: float) -> bool:
    return math.isfinite(y) and y == math.floor(y)


def pow_(x: float, y: float) -> float:
    if x != x or y != y:
        return NAN
    if x < 0.0 and not _is_integer(y):
        return NAN
    if x == 0.0 and y < 0.0:
        return NAN
    try:
        return math.pow(x, y)
    except OverflowError:
        if x < 0.0 and math.fmod(y, 2.0) != 0.0:
            return -INF
        return INF


def sin(x: float) -> float:
    if math.isinf(x):
        return NAN
    return math.sin(x)


def cos(x: float) -> float:
    if math.isinf(x):
        return NAN
    return math.cos(x)


def tan(x: float) -> float:
    if math.isinf(x):
        return NAN
    return math.tan(x)


def exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return INF


def log(x: float) -> float:
    if not x > 0.0:
        return NAN
    return math.log(x)


def sqrt(x: float) -> float:
    if x < 0.0 or x != x:
        return NAN
    return math.sqrt(x)


def abs_(x: float) -> float:
    return math.fabs(x)


UNARY = {
    "neg": neg,
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "abs": abs_,
}

BINARY = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "div": div,
    "pow": pow_,
}
