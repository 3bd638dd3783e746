"""Exception hierarchy shared by the library and the command-line front end."""


class ValueBisectError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ValueBisectError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the source where parsing stopped and
    ``expected`` describes what the parser wanted to see there.
    """

    def __init__(self, message: str, offset: int, expected: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = expected


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset, "x, a function name or 'piecewise'")
        self.name = name


class EvaluationError(ValueBisectError, ArithmeticError):
    """A function evaluation produced a non-finite value where a finite one was required."""

    def __init__(self, message: str, x: float | None = None):
        super().__init__(message)
        self.x = x


class BracketError(ValueBisectError, ValueError):
    """An initial bracket (value bracket or root bracket) violates its precondition."""


class OracleIndeterminate(ValueBisectError):
    """The solvability oracle could not decide a level and the policy is to abort."""

    def __init__(self, level: float):
        super().__init__(f"oracle could not decide whether level {level!r} is reachable")
        self.level = level


class DiagnosticUnavailable(ValueBisectError, ValueError):
    """Not enough non-degenerate history to estimate a convergence rate."""
