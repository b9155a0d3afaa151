import random
from pathlib import Path

import pytest

from flgauge.arith import PrimeContext

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "flgauge" / "fixtures"


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def ctx3():
    return PrimeContext(3, 4)


@pytest.fixture
def k3():
    """Residue field F_3 as a precision-1 context."""
    return PrimeContext(3, 1)


@pytest.fixture
def f4():
    """W(F_4)/16 with minpoly x^2 + x + 1."""
    return PrimeContext(2, 4, 2, (1, 1, 1))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
