import math

import numpy as np
import pytest

from so3mes.dynamics import FieldConfig, solve_field_for_ratio

THETA = math.pi / 5


def resonant(r, theta=THETA, omega=1.0, hbar=1.0):
    return FieldConfig(solve_field_for_ratio(theta, omega, hbar, r), theta, omega, hbar)


@pytest.fixture
def fig1_cfg():
    return resonant(1.0)


@pytest.fixture
def fig2_cfg():
    return resonant(1.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_su2(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b = complex(q[0], q[1]), complex(q[2], q[3])
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def random_state(rng):
    s = rng.normal(size=4) + 1j * rng.normal(size=4)
    return s / np.linalg.norm(s)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
