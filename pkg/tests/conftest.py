import numpy as np
import pytest

from bephase import states


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


@pytest.fixture
def phi2():
    """Two-qubit maximally entangled projector."""
    return states.maximally_entangled(2).projector()


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
