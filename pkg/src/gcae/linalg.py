"""Dense linear-algebra helpers shared by the optimizer.

All randomness in the package goes through :func:`make_rng`, which wraps
numpy's PCG64 bit generator. Nothing here keeps state between calls.
"""

import numpy as np
import scipy.linalg

from .errors import NumericalError, ValidationError

# singular values below RANK_TOL * s_max count as zero
RANK_TOL = 1e-12


def make_rng(seed):
    """Seeded PCG64 generator; the only source of randomness in the package."""
    return np.random.Generator(np.random.PCG64(seed))


def check_finite(*arrays, where="input"):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericalError(f"non-finite values in {where}")


def solve_smoothed(A, R, theta=0.0):
    """Solve ``(A + theta * I) X = R`` for symmetric PSD ``A``.

    Uses a Cholesky factorization rather than forming the inverse. When
    the shifted matrix is not numerically positive definite a
    :class:`NumericalError` is raised instead of returning garbage.
    """
    A = np.asarray(A, dtype=float)
    R = np.asarray(R, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"A must be square, got shape {A.shape}")
    if R.shape[0] != A.shape[0]:
        raise ValidationError(f"R has {R.shape[0]} rows, A is {A.shape[0]}x{A.shape[0]}")
    if theta < 0:
        raise ValidationError("theta must be non-negative")
    check_finite(A, R, where="solve_smoothed")

    n = A.shape[0]
    S = A + theta * np.eye(n)
    S = 0.5 * (S + S.T)
    try:
        factor = scipy.linalg.cho_factor(S, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"smoothed system is singular (theta={theta:g}); increase theta"
        ) from exc
    diag = np.abs(np.diag(factor[0]))
    # cond(S) ~ (max/min of Cholesky diagonal)^2
    if diag.min() <= np.sqrt(np.finfo(float).eps) * diag.max() * 1e-1:
        raise NumericalError(
            f"smoothed system is numerically singular (theta={theta:g}); increase theta"
        )
    X = scipy.linalg.cho_solve(factor, R, check_finite=False)
    check_finite(X, where="solve_smoothed result")
    return X


def compact_svd(M):
    """Thin SVD ``M = U @ diag(S) @ V.T`` with S non-increasing.

    Returns ``(U, S, V)`` where U is n x k, V is m x k and k = min(n, m).
    """
    M = np.asarray(M, dtype=float)
    check_finite(M, where="compact_svd")
    U, S, Vt = np.linalg.svd(M, full_matrices=False)
    return U, S, Vt.T


def numerical_rank(M, tol=RANK_TOL):
    S = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if S.size == 0 or S[0] == 0:
        return 0
    return int(np.sum(S > tol * S[0]))


def random_row_orthonormal(rows, cols, seed):
    """Random ``rows x cols`` matrix with orthonormal rows (W @ W.T = I)."""
    if rows < 1 or cols < 1:
        raise ValidationError("rows and cols must be positive")
    if rows > cols:
        raise ValidationError(f"cannot have {rows} orthonormal rows in dimension {cols}")
    rng = make_rng(seed)
    g = rng.standard_normal((cols, rows))
    q, r = np.linalg.qr(g)
    # sign fix makes the draw Haar-distributed and removes LAPACK sign ambiguity
    q = q * np.where(np.diag(r) < 0, -1.0, 1.0)
    return np.ascontiguousarray(q.T)
