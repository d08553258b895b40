import numpy as np
import pytest
from hypothesis import settings

from gaussbath.params import SystemParams
from gaussbath.states import InitialState

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def default_state():
    return InitialState(s=1.0, d=1.0)


@pytest.fixture
def default_params():
    return SystemParams()


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_spd(rng, n=4, scale=1.0):
    a = rng.normal(size=(n, n))
    return scale * (a @ a.T + 0.5 * np.eye(n))
