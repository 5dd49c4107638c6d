import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest  # noqa: E402

from jacbound.exact import Interval  # noqa: E402


def dec(s: str) -> Fraction:
    return Fraction(s)


def encloses_within(iv: Interval, ref: str, tol: Fraction) -> bool:
    """True if every point of iv is within tol of the decimal ref."""
    r = Fraction(ref)
    return r - tol <= iv.lo and iv.hi <= r + tol


@pytest.fixture
def close():
    return encloses_within


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
