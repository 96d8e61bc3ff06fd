import pytest

from acceptance_log import ACCEPTANCE_LINES

from fisherquartic.oracle import SolverConfig


@pytest.fixture(scope="session")
def config():
    return SolverConfig()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
