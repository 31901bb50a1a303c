from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

mpmath.mp.dps = 150


def mpf(q) -> mpmath.mpf:
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def encloses(iv, value) -> bool:
    """Whether the dyadic interval contains a high-precision reference value."""
    return mpf(iv.lo) <= value <= mpf(iv.hi)


@pytest.fixture
def oracle():
    return mpmath.mp


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
