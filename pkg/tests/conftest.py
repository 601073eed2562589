import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from groupcs.group_model import new_partition  # noqa: E402


@pytest.fixture
def p4():
    """n=4, G1={1,2}, G2={3,4}, k=2 (0-based internally)."""
    return new_partition(4, [[0, 1], [2, 3]], 2)


@pytest.fixture
def p8():
    """n=8, G1={1}, G2={2,3,4}, G3={5,6}, G4={7,8}, k=4."""
    return new_partition(8, [[0], [1, 2, 3], [4, 5], [6, 7]], 4)


@pytest.fixture
def x4():
    return np.array([1.0, 0.1, 0.6, 0.6])


@pytest.fixture
def x8():
    return np.array([0.1, 1.0, 0.2, 0.3, 0.4, 0.5, 0.4, 0.7])


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(LINES):
        terminalreporter.write_line(LINES[key])
