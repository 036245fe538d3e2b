import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from periodrh.lfunctions import completed_lvalues  # noqa: E402
from periodrh.modforms import eigenforms  # noqa: E402


@functools.lru_cache(maxsize=None)
def eigen(k, precision=None):
    return eigenforms(k, precision)


@functools.lru_cache(maxsize=None)
def lvalues(k, j=0, precision=None):
    return completed_lvalues(eigen(k, precision)[1][j])


@pytest.fixture(scope="session")
def delta():
    return eigen(12)[1][0]


@pytest.fixture(scope="session")
def delta_values():
    return lvalues(12)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
