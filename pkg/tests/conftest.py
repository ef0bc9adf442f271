import numpy as np
import pytest

import fastslow as fs

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_lines():
    """Collector for per-criterion pass/fail lines, echoed after the run."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fm():
    return fs.make_frequency("sine", (2.0, 1.0))


@pytest.fixture(scope="session")
def params():
    return fs.SystemParams(y_star=0.0, p_star=1.0, u_star=1.0, horizon_T=1.0)


@pytest.fixture(scope="session")
def dc(params, fm):
    return fs.derived_constants(params, fm)


@pytest.fixture(scope="session")
def expansion_run(params, fm):
    """Averaged expansion solved once, evaluated on the standard grid."""
    traj = fs.solve_expansion(params, fm)
    grid = np.linspace(0.0, 1.0, 2001)
    base, corr = fs.eval_expansion(traj, grid)
    return traj, grid, base, corr
