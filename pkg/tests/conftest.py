import numpy as np
import pytest

from oracles import random_physical, std_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def physical_states():
    gen = np.random.default_rng(2024)
    return [random_physical(gen, max_squeeze=1.2) for _ in range(1000)]


@pytest.fixture
def tms05():
    a, c = np.cosh(1.0) / 2, np.sinh(1.0) / 2
    return std_matrix(a, a, c, -c)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
