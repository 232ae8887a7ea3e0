import sys
from pathlib import Path

import gmpy2
import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thetasum import make_context  # noqa: E402


@pytest.fixture
def ctx256():
    return make_context(1, 1e-30, bits=256)


@pytest.fixture(autouse=True)
def wide_test_arithmetic():
    """Test-side gmpy2 and mpmath arithmetic at 1024 bits, not the 53-bit defaults."""
    with gmpy2.context(gmpy2.get_context(), precision=1024, real_prec=1024, imag_prec=1024), \
            mpmath.workprec(1024):
        yield


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; all lines are repeated in the terminal summary."""
    def emit(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
