import itertools

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def cube(n):
    """All assignments as tuples (x_1, .., x_n)."""
    return itertools.product((0, 1), repeat=n)


def lit_true(lit, point):
    return point[abs(lit) - 1] == (1 if lit > 0 else 0)


def falsifies(point, lits):
    return not any(lit_true(x, point) for x in lits)


def eq_holds(variables, rhs, point):
    return sum(point[v - 1] for v in variables) % 2 == rhs


@pytest.fixture
def acceptance_lines():
    return ACCEPTANCE_LINES
