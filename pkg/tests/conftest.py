import pathlib
import random
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))


@pytest.fixture
def rng(request) -> random.Random:
    """Deterministic per-test RNG so failures reproduce."""
    seed = sum(request.node.nodeid.encode())
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.line(line)
