import sys
from pathlib import Path

import pytest
from hypothesis import settings

from ringcascade.model import ArraySpec, StateVector, build_cascade
from ringcascade.dynamics import evolve

sys.path.insert(0, str(Path(__file__).parent))

REPORT: list[str] = []

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def simulate(n, g, delta, delta_empty=None, t_end=10.0, dt=None):
    spec = ArraySpec.chain(n, g, delta, delta_empty=delta_empty)
    ops = build_cascade(spec)
    if dt is None:
        dt = 0.01 / ops.max_rate
    return spec, ops, evolve(ops, StateVector.excited_atom(n), t_end, dt)


@pytest.fixture(scope="session")
def strong_single():
    return simulate(1, 5.0, 0.5, t_end=40.0)


@pytest.fixture(scope="session")
def weak_single():
    return simulate(1, 0.25, 0.5, t_end=40.0)


@pytest.fixture(scope="session")
def trap_pair():
    """Source ring plus one empty ring tuned to the right Rabi peak."""
    return simulate(2, 5.0, 0.5, delta_empty=7.32, t_end=40.0)


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
