import numpy as np
import pytest

from relstate import HilbertStructure, StateVector

S2 = 1 / np.sqrt(2)

# photon modes and detector pointer states
UP = np.array([1, 0], dtype=complex)
LOW = np.array([0, 1], dtype=complex)
D_H = np.array([1, 0], dtype=complex)
D_V = np.array([0, 1], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def which_way_state():
    """Photon entangled with the detector pointer: (|u>|D_H> + |l>|D_V>)/sqrt(2)."""
    amps = S2 * (np.kron(UP, D_H) + np.kron(LOW, D_V))
    return StateVector(HilbertStructure((2, 2)), amps)


@pytest.fixture
def bell_state():
    return StateVector(HilbertStructure((2, 2)), S2 * np.array([1, 0, 0, 1], dtype=complex))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
