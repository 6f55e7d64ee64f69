import math

import numpy as np
import pytest

from stripwaves.continuation import newton_solve, trace_branch
from stripwaves.problem import WaveParameters, WaveState
from stripwaves.spectral import SpectralFunction

TANH1 = math.tanh(1.0)
COTH1 = 1.0 / TANH1
N_TEST = 64


def solve_point(eps, n_max=N_TEST, mode=1, k=1.0, h=1.0, g=1.0):
    mu = math.tanh(mode * k * h) / (mode * k)
    guess = WaveState(WaveParameters(k, h, g, mu), SpectralFunction.from_trig(cos=np.eye(n_max)[mode - 1], n_max=n_max))
    return newton_solve(guess, mode, eps)


@pytest.fixture(scope="session")
def point_001():
    return solve_point(0.01)


@pytest.fixture(scope="session")
def branch_002():
    return trace_branch(1, 0.02, 10, WaveParameters(), N_TEST)


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])
