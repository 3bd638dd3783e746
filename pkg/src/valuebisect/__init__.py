"""Global extrema of univariate functions by bisection on the value axis."""
from ._backend import available as available_kernels
from ._backend import kernel as _kernel
from .errors import (
    BracketError,
    DiagnosticUnavailable,
    EvaluationError,
    OracleIndeterminate,
    ParseError,
    UnknownIdentifierError,
    ValueBisectError,
)
from .expr import Binary, Condition, Const, Expr, Piecewise, Unary, Var, evaluate, is_domain_error, negate, to_text
from .extremum import (
    Diagnostic,
    ExtremumReport,
    IterationRecord,
    SolverConfig,
    convergence_diagnostic,
    error_bound,
    iterations_needed,
    maximize,
    minimize,
    tangency_stop,
)
from .interval import Enclosure, Interval, eval_interval, midpoint
from .oracle import (
    OracleConfig,
    OracleKind,
    OracleVerdict,
    UnknownPolicy,
    ValueBracket,
    Verdict,
    decide_reachable,
    decide_reachable_certified,
    decide_reachable_grid,
    dyadic_bracket,
    endpoint_bracket,
    initial_bracket,
    witness_slack,
)
from .parser import parse
from .rootfind import RootResult, bisect_root, solve_level

__version__ = "0.1.0"


def kernel_name() -> str:
    """Name of the active evaluation kernel, ``"compiled"`` or ``"python"``."""
    return _kernel().NAME
