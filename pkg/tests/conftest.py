from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from intersub import catalog

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

HALF = Fraction(1, 2)


@pytest.fixture(scope="session")
def square():
    return catalog.load_example("square-gbit")


@pytest.fixture(scope="session")
def fivedim():
    return catalog.load_example("fivedim-es-ext")


@pytest.fixture(scope="session")
def direct_sum():
    return catalog.load_example("direct-sum-es")


@pytest.fixture(scope="session")
def sq_effects(square):
    return catalog.square_effects(square.model)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
