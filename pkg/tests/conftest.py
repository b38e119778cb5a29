import time

import numpy as np
import pytest

from rosto import evolution as ev
from rosto.periodic import PeriodicGrid

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def full_run_30():
    """Full linearized run with the default parameters (m=4096, dt=1e-3, T=30).

    Yields (v0, run, wall seconds).
    """
    v0 = ev.example_v0(20.0, PeriodicGrid(4096))
    t0 = time.perf_counter()
    run = ev.evolve(v0, 30.0, 1e-3, "full")
    return v0, run, time.perf_counter() - t0


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report():
    """Record one acceptance line; it is echoed immediately and in the summary."""

    def add(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
