import shutil
import importlib.util
from pathlib import Path

import pytest

from striprev.pddl import PddlSource, parse_domain

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name):
    return FIXTURES / name


def solver_available():
    return shutil.which("clingo") is not None or importlib.util.find_spec("clingo") is not None


needs_solver = pytest.mark.skipif(not solver_available(), reason="no ASP solver installed")


@pytest.fixture
def example1():
    return parse_domain(PddlSource.from_file(FIXTURES / "example1.pddl"))


@pytest.fixture
def rev2():
    return parse_domain(PddlSource.from_file(FIXTURES / "rev-2.pddl"))


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
