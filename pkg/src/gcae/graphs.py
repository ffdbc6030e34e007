"""Low-rank affinity graphs through the factorization Z = F G^T.

Each view's graph minimizes ||phi - F G^T phi||_F^2 with F, G of width r.
The two blocks have closed-form ridge-smoothed updates and are alternated
from a random G. ``K = phi phi^T`` (N x N) is the dominant memory object
and is computed once per view.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .kernel import KernelizedView
from .linalg import make_rng, numerical_rank, solve_smoothed

DEFAULT_THETA = 1e-5
DEFAULT_ITER = 80


@dataclass(frozen=True)
class FactorPair:
    F: np.ndarray
    G: np.ndarray
    losses: tuple = ()

    @property
    def rank_r(self):
        return self.F.shape[1]

    def graph(self):
        return self.F @ self.G.T

    def rank(self):
        return numerical_rank(self.graph())


def _phi(phi):
    return phi.phi if isinstance(phi, KernelizedView) else np.asarray(phi, dtype=float)


def gram(phi):
    p = _phi(phi)
    return p @ p.T


def update_F(phi, G, theta=DEFAULT_THETA, K=None):
    """``F = K G (G^T K G + theta I)^-1`` with ``K = phi phi^T``."""
    if K is None:
        K = gram(phi)
    if G.shape[0] != K.shape[0]:
        raise ValidationError(f"G has {G.shape[0]} rows, expected {K.shape[0]}")
    KG = K @ G
    # inner matrix is symmetric, so solve for F^T
    return solve_smoothed(G.T @ KG, KG.T, theta).T


def update_G(F, theta=DEFAULT_THETA):
    """``G = F (F^T F + theta I)^-1``."""
    F = np.asarray(F, dtype=float)
    return solve_smoothed(F.T @ F, F.T, theta).T


def graph_residual(phi, fp, K=None):
    """``||phi - F G^T phi||_F^2``."""
    p = _phi(phi)
    if fp.F.shape[0] != p.shape[0] or fp.G.shape[0] != p.shape[0]:
        raise ValidationError("factor rows do not match the number of samples")
    R = p - fp.F @ (fp.G.T @ p)
    return float(np.sum(R * R))


def init_G(n, r, seed):
    G = make_rng(seed).standard_normal((n, r))
    return G / np.linalg.norm(G, axis=0)


def learn_factors(phi, r, theta=DEFAULT_THETA, max_iter=DEFAULT_ITER, seed=0, tol=1e-6):
    """Alternate F and G updates from a seeded random G.

    Stops after ``max_iter`` sweeps or once the relative loss change falls
    below ``tol``. The returned pair carries the loss after each sweep,
    preceded by the loss at the starting point (F = G).
    """
    p = _phi(phi)
    n = p.shape[0]
    if not 1 <= r <= n:
        raise ValidationError(f"rank r={r} must lie in [1, {n}]")
    if max_iter < 1:
        raise ValidationError("max_iter must be at least 1")
    K = p @ p.T
    G = init_G(n, r, seed)
    F = G.copy()
    losses = [graph_residual(p, FactorPair(F, G))]
    for _ in range(max_iter):
        F = update_F(p, G, theta, K=K)
        G = update_G(F, theta)
        losses.append(graph_residual(p, FactorPair(F, G)))
        prev, cur = losses[-2], losses[-1]
        if abs(prev - cur) <= tol * max(prev, np.finfo(float).tiny):
            break
    return FactorPair(F, G, tuple(losses))
