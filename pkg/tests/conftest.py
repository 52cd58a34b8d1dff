import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "cmtk",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cmtk")


@pytest.fixture
def rng():
    return random.Random(0)


# One human-readable verdict line per acceptance criterion, printed in the
# terminal summary so they survive output capture.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
