import math

import pytest

from reflectap import FrequencyBasis

ACCEPTANCE_LINES = []


@pytest.fixture
def one():
    return FrequencyBasis((1.0,))


@pytest.fixture
def sqrt2():
    return FrequencyBasis((1.0, math.sqrt(2.0)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
