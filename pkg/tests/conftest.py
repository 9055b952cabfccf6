import numpy as np
import pytest

from cpmfrob import randomgen as rg


@pytest.fixture
def rng():
    return np.random.default_rng(20221014)


def ginibre(rng, rows, cols):
    return rg.ginibre(rng, rows, cols)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
