import numpy as np
import pytest
from hypothesis import strategies as hst

from meurkit.qcore import Observable, QuantumState
from meurkit.sampling import random_observables, random_state

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    log = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number, title, ok, detail=""):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" | {detail}"
        log.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for line in log:
            terminalreporter.write_line(line)


def random_pair(dim, rng):
    a, b = random_observables(dim, 2, rng)
    return a, b, random_state(dim, rng)


@hst.composite
def scenarios(draw, min_dim=2, max_dim=6, n_obs=2):
    """(observables, state) drawn through a numpy seed so shrinking stays cheap."""
    dim = draw(hst.integers(min_dim, max_dim))
    seed = draw(hst.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return random_observables(dim, n_obs, rng), random_state(dim, rng)


SX = Observable(np.array([[0, 1], [1, 0]]))
SY = Observable(np.array([[0, -1j], [1j, 0]]))
SZ = Observable(np.array([[1, 0], [0, -1]]))
KET0 = QuantumState(np.array([1, 0]))
KET1 = QuantumState(np.array([0, 1]))
