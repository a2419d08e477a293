import numpy as np
import pytest

from capdp.profiles import BOTTOM
from capdp.rng import SplitMix64

VERDICTS: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _warm_jit():
    from capdp._kernels import warm_kernels
    warm_kernels()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)


def make_concave(rng: SplitMix64, n: int, lo: int = -50, hi: int = 50,
                 dlo: int = -20, dhi: int = 20) -> list[int]:
    """Random concave sequence: sorted diffs accumulated from a random start."""
    start = rng.randint(lo, hi)
    diffs = sorted((rng.randint(dlo, dhi) for _ in range(n - 1)), reverse=True)
    out = [start]
    for d in diffs:
        out.append(out[-1] + d)
    return out


def make_mixed(rng: SplitMix64, n: int, bottom_one_in: int = 5) -> list:
    return [BOTTOM if rng.randint(0, bottom_one_in - 1) == 0
            else rng.randint(-100, 100) for _ in range(n)]


def make_inverse_monge(rng: SplitMix64, nrows: int, ncols: int) -> np.ndarray:
    """Dense matrix satisfying A[i,j] + A[i+1,j+1] >= A[i+1,j] + A[i,j+1].

    Two-dimensional prefix sums of non-negative increments have that cross
    difference equal to the increment itself; row/column offsets keep it.
    """
    inc = np.empty((nrows, ncols), np.int64)
    for i in range(nrows):
        for j in range(ncols):
            inc[i, j] = rng.randint(0, 9)
    pref = np.cumsum(np.cumsum(inc, axis=0), axis=1)
    rows = np.array([rng.randint(-30, 30) for _ in range(nrows)], np.int64)
    cols = np.array([rng.randint(-30, 30) for _ in range(ncols)], np.int64)
    return pref + rows[:, None] + cols[None, :]
