import numpy as np
import pytest

from capdp.errors import ValidationError
from capdp.profiles import BOTTOM
from capdp.rng import SplitMix64
from capdp.smawk import MatrixOracle, is_monge, smawk_row_maxima
from conftest import make_inverse_monge


def dense_oracle(W):
    n, m = W.shape
    return MatrixOracle(n, m, lambda i, j: int(W[i, j]))


def brute_row_maxima(W):
    out = []
    for i in range(W.shape[0]):
        j = int(np.argmax(W[i]))
        out.append((j, int(W[i, j])))
    return out


def test_single_row_and_column():
    assert smawk_row_maxima(dense_oracle(np.array([[3, 9, 9]]))) == [(1, 9)]
    got = smawk_row_maxima(dense_oracle(np.array([[2], [5]])))
    assert got == [(0, 2), (0, 5)]


def test_small_fixed_matrix():
    # prefix-sum built, argmax columns move right as rows go down
    W = np.array([
        [4, 2, 1],
        [5, 4, 4],
        [5, 6, 7],
    ])
    assert is_monge(dense_oracle(W))
    assert smawk_row_maxima(dense_oracle(W)) == [(0, 4), (0, 5), (2, 7)]


def test_ties_pick_smallest_column():
    W = np.array([
        [1, 1, 0],
        [1, 1, 1],
        [0, 1, 1],
    ])
    assert is_monge(dense_oracle(W))
    got = smawk_row_maxima(dense_oracle(W))
    assert [c for c, _ in got] == [0, 0, 1]


def test_random_inverse_monge_matches_brute_force():
    rng = SplitMix64(2024)
    for _ in range(250):
        n = rng.randint(1, 20)
        m = rng.randint(1, 20)
        W = make_inverse_monge(rng, n, m)
        assert is_monge(dense_oracle(W))
        assert smawk_row_maxima(dense_oracle(W)) == brute_row_maxima(W)


def test_call_count_stays_linear():
    rng = SplitMix64(5)
    for n, m in [(64, 64), (256, 64), (64, 256), (500, 500), (1000, 37)]:
        W = make_inverse_monge(rng, n, m)
        oracle = dense_oracle(W)
        assert smawk_row_maxima(oracle) == brute_row_maxima(W)
        assert oracle.calls <= 8 * (n + m)


def test_bottom_column_loses():
    # BOTTOM marks an unusable column; finite entries must win the row
    def ev(i, j):
        if j == 1:
            return BOTTOM
        return -abs(i - 2 * j)

    got = smawk_row_maxima(MatrixOracle(3, 2, ev))
    assert got == [(0, 0), (0, -1), (0, -2)]


def test_all_bottom_row():
    got = smawk_row_maxima(MatrixOracle(2, 1, lambda i, j: BOTTOM))
    assert got == [(0, BOTTOM), (0, BOTTOM)]


def test_is_monge_examples():
    n = 6
    prod = MatrixOracle(n, n, lambda i, j: i * j)
    assert is_monge(prod)
    # +(i-j)^2 has cross difference -2, the wrong sign
    sq = MatrixOracle(n, n, lambda i, j: (i - j) ** 2)
    assert not is_monge(sq)
    neg_sq = MatrixOracle(n, n, lambda i, j: -((i - j) ** 2))
    assert is_monge(neg_sq)


def test_is_monge_rejects_bottom():
    with pytest.raises(ValidationError):
        is_monge(MatrixOracle(2, 2, lambda i, j: BOTTOM))


def test_empty_matrix_rejected():
    with pytest.raises(ValidationError):
        smawk_row_maxima(MatrixOracle(0, 3, lambda i, j: 0))
