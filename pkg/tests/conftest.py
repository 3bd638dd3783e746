import math
import sys

import pytest
from hypothesis import HealthCheck, settings

from valuebisect import _backend
from valuebisect.parser import parse

KERNELS = _backend.available()

# The kernel fixture only selects a backend for the whole test, so sharing
# it across generated examples is intended.
settings.register_profile("default", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
settings.load_profile("default")

# The worked example used throughout: a jump at 0, a kink at -1 and a
# plateau of height 4 on [-1, 0).
PIECEWISE_TEXT = "piecewise(x<=-1: x+5; x<0: 4; else: 3)"
PARABOLA_TEXT = "-(x-0.5)^2+1"
ROOT_TEXT = "exp(x)-4*x"


def piecewise_reference(x: float) -> float:
    if x <= -1:
        return x + 5
    if x < 0:
        return 4.0
    return 3.0


@pytest.fixture(params=KERNELS)
def kernel(request):
    """Run the test once per available evaluation kernel."""
    with _backend.using(request.param):
        yield request.param


@pytest.fixture
def piecewise_fn():
    return parse(PIECEWISE_TEXT)


@pytest.fixture
def parabola():
    return parse(PARABOLA_TEXT)


def ulps_apart(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
