import numpy as np
import pytest

from dyadic_schrodinger import GridFunction, project_P0


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_grid(rng, J, L=1, complex_=True, mean_zero=False):
    n = L << J
    v = rng.normal(size=n)
    if complex_:
        v = v + 1j * rng.normal(size=n)
    f = GridFunction(J, L, v)
    return f - project_P0(f) if mean_zero else f


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
