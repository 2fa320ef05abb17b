import pytest

from cellkit.coxeter import CoxeterContext
from cellkit.hecke import kl_table

_TABLES = {}

ACCEPTANCE_LINES = []


def table(n):
    if n not in _TABLES:
        _TABLES[n] = kl_table(CoxeterContext.of(n))
    return _TABLES[n]


@pytest.fixture(scope="session")
def tables():
    return table


@pytest.fixture
def ctx3():
    return CoxeterContext.of(3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
