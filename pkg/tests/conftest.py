import numpy as np
import pytest

from swirlbound import make_grid, reference, simulate


@pytest.fixture(scope="session")
def annulus_run():
    """Pure-swirl decay on [1, 4] x [-4, 4), 129 x 256 nodes, to t = 0.5."""
    return simulate(reference.annulus_config())


@pytest.fixture(scope="session")
def extended_coarse():
    return simulate(reference.extended_config(129))


@pytest.fixture(scope="session")
def extended_fine():
    return simulate(reference.extended_config(257))


@pytest.fixture(scope="session")
def small_run():
    """A cheap swirl run with meridional flow, for plumbing tests."""
    grid = make_grid(1, 4, -4, 4, 33, 64, True)
    omega0 = lambda r, z: 5 * np.cos(np.pi * z / 4) * ((r - 1) * (4 - r)) ** 2
    cfg = reference.EvolutionConfig(grid, reference.gamma0, 0.05, omega0=omega0,
                                    output_interval=1 / 128)
    return simulate(cfg)


@pytest.fixture
def fine_grid():
    return make_grid(0.8, 4.4, -4.4, 4.4, 181, 441)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line; they are repeated at the end of the session."""
    def record(criterion, ok, text):
        line = f"{'PASS' if ok else 'FAIL'}  [{criterion}] {text}"
        print(line)
        _VERDICTS.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
