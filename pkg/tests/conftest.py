import random

import pytest
from hypothesis import settings

settings.register_profile("plumbo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("plumbo")


@pytest.fixture
def rng():
    return random.Random(1729)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(LINES):
            terminalreporter.write_line(LINES[num])
