import numpy as np
import pytest

from entquasi.state import dephased_tmsv

ACCEPTANCE_LINES = []

# reference decomposition at zeta=0.62, sigma=2, d=2
TABLE_G = [0.615600, 0.236637, 0.190946, 0.190946, 0.149659, 0.149659]
TABLE_P = [0.618287, 0.217677, 0.069431, 0.069431, -0.061295, -0.061295]
TABLE_A = [
    [1.0, 0.0],
    [0.0, 1.0],
    [0.496987, 0.867758],
    [0.496987, -0.867758],
    [0.549275, 0.835642j],
    [0.549275, -0.835642j],
]


@pytest.fixture
def table_state():
    return dephased_tmsv(0.62, 2.0, 2)


def assert_same_up_to_sign(a, b, atol):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    assert min(np.max(np.abs(a - b)), np.max(np.abs(a + b))) <= atol, (a, b)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
