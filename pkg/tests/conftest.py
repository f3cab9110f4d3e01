import numpy as np
import pytest

from greedy_frame import Frame, make_rng

EPS = np.finfo(np.float64).eps


def random_frame(rng, d=None, N=None):
    """Gaussian frame with d in 2..10 and d <= N <= 3d unless given."""
    if d is None:
        d = int(rng.integers(2, 11))
    if N is None:
        N = int(rng.integers(d, 3 * d + 1))
    while True:
        V = rng.standard_normal((N, d))
        s = np.linalg.svd(V, compute_uv=False)
        if s[-1] ** 2 > 1e-6 * s[0] ** 2:
            return Frame(V)


def rounding_floor(n, scale):
    """Accumulated float64 rounding after n iterations on data of size ``scale``."""
    return 16 * (n + 1) * EPS * scale


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture
def toy():
    """Rows (1,0), (0,1), (1,1); S = [[2,1],[1,2]], bounds 1 and 3."""
    return Frame([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
