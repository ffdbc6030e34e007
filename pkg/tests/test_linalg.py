import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcae.errors import NumericalError, ValidationError
from gcae.linalg import compact_svd, numerical_rank, random_row_orthonormal, solve_smoothed


def random_spd(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    return A @ A.T + 0.1 * np.eye(n)


def test_solve_identity():
    np.testing.assert_array_equal(solve_smoothed(np.eye(3), np.eye(3), 0.0), np.eye(3))


def test_solve_zero_matrix_with_smoothing():
    X = solve_smoothed(np.zeros((2, 2)), np.array([[1.0], [1.0]]), 0.5)
    np.testing.assert_allclose(X, [[2.0], [2.0]])


def test_solve_random_spd_residual():
    A = random_spd(5, 0)
    R = np.random.default_rng(1).standard_normal((5, 3))
    X = solve_smoothed(A, R, 1e-6)
    resid = np.linalg.norm((A + 1e-6 * np.eye(5)) @ X - R)
    assert resid <= 1e-8 * (np.linalg.norm(A) + 1e-6) * np.linalg.norm(X)


def test_solve_singular_raises():
    with pytest.raises(NumericalError):
        solve_smoothed(np.zeros((3, 3)), np.ones((3, 1)), 0.0)
    # rank-1 PSD matrix without smoothing
    v = np.ones((4, 1))
    with pytest.raises(NumericalError):
        solve_smoothed(v @ v.T, np.ones((4, 1)), 0.0)


def test_solve_rejects_bad_input():
    with pytest.raises(NumericalError):
        solve_smoothed(np.array([[np.nan]]), np.ones((1, 1)), 1.0)
    with pytest.raises(ValidationError):
        solve_smoothed(np.eye(2), np.ones((3, 1)), 1.0)
    with pytest.raises(ValidationError):
        solve_smoothed(np.eye(2), np.ones((2, 1)), -1.0)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), m=st.integers(1, 4), seed=st.integers(0, 2**16),
       theta=st.floats(1e-6, 10.0))
def test_solve_residual_property(n, m, seed, theta):
    rng = np.random.default_rng(seed)
    L = rng.standard_normal((n, max(1, n // 2)))
    A = L @ L.T  # PSD, usually singular
    R = rng.standard_normal((n, m))
    X = solve_smoothed(A, R, theta)
    resid = np.linalg.norm((A + theta * np.eye(n)) @ X - R)
    assert resid <= 1e-8 * (np.linalg.norm(A) + theta) * np.linalg.norm(X) + 1e-300


def test_svd_identity():
    U, S, V = compact_svd(np.eye(3))
    np.testing.assert_allclose(S, [1, 1, 1])
    np.testing.assert_allclose(U @ V.T, np.eye(3), atol=1e-14)


def test_svd_rank_deficient_diag():
    _, S, _ = compact_svd(np.diag([3.0, 0.0]))
    np.testing.assert_allclose(S, [3.0, 0.0])
    assert numerical_rank(np.diag([3.0, 0.0])) == 1


@pytest.mark.parametrize("shape", [(4, 2), (2, 4), (6, 6), (1, 5)])
def test_svd_reconstruction_and_orthonormality(shape):
    M = np.random.default_rng(3).standard_normal(shape)
    U, S, V = compact_svd(M)
    k = min(shape)
    assert U.shape == (shape[0], k) and V.shape == (shape[1], k) and S.shape == (k,)
    assert np.linalg.norm(U @ np.diag(S) @ V.T - M) <= 1e-8 * np.linalg.norm(M)
    assert np.abs(U.T @ U - np.eye(k)).max() <= 1e-10
    assert np.abs(V.T @ V - np.eye(k)).max() <= 1e-10
    assert np.all(np.diff(S) <= 0) and np.all(S >= 0)


def test_svd_rejects_nonfinite():
    with pytest.raises(NumericalError):
        compact_svd(np.array([[1.0, np.inf]]))


def test_row_orthonormal_scalar():
    W = random_row_orthonormal(1, 1, seed=11)
    assert W.shape == (1, 1) and abs(W[0, 0]) == pytest.approx(1.0)


def test_row_orthonormal_deterministic():
    a = random_row_orthonormal(2, 5, seed=7)
    b = random_row_orthonormal(2, 5, seed=7)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, random_row_orthonormal(2, 5, seed=8))


def test_row_orthonormal_product():
    W = random_row_orthonormal(3, 8, seed=0)
    assert np.abs(W @ W.T - np.eye(3)).max() <= 1e-10


def test_row_orthonormal_too_many_rows():
    with pytest.raises(ValidationError):
        random_row_orthonormal(4, 3, seed=0)


@settings(max_examples=30, deadline=None)
@given(cols=st.integers(1, 40), seed=st.integers(0, 2**31 - 1), data=st.data())
def test_row_orthonormal_property(cols, seed, data):
    rows = data.draw(st.integers(1, cols))
    W = random_row_orthonormal(rows, cols, seed)
    assert np.abs(W @ W.T - np.eye(rows)).max() <= 1e-10
