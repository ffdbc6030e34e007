"""Binary matrix-factorization clustering in Hamming space.

Codes B (b x N, entries +-1) are approximated by Q H where Q (b x c) holds
binary centroids and H (c x N) is a one-hot indicator. Centroids follow
discrete proximal linearized steps on

    ||B - Q H||_F^2 + rho ||Q^T 1||^2,

indicators are nearest-centroid assignments by Hamming distance. Codes are
bit-packed for the distance scans.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import make_rng

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def sgn(x):
    """Elementwise sign with sgn(0) = +1."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


@dataclass
class BinaryClusterModel:
    Q: np.ndarray
    H: np.ndarray
    history: tuple = ()

    @property
    def c(self):
        return self.Q.shape[1]

    @property
    def labels(self):
        return np.argmax(self.H, axis=0)

    def reconstruction(self):
        return self.Q @ self.H


def one_hot(labels, c):
    labels = np.asarray(labels)
    H = np.zeros((c, labels.size))
    H[labels, np.arange(labels.size)] = 1.0
    return H


def pack_codes(X):
    """Pack the columns of a +-1 matrix into uint8 words (bit set where +1)."""
    return np.packbits(np.asarray(X).T > 0, axis=1)


def hamming_distance(x, y):
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.size} vs {y.size}")
    return int(np.count_nonzero(x != y))


def hamming_matrix(B, Q):
    """N x c matrix of Hamming distances between columns of B and Q."""
    pb, pq = pack_codes(B), pack_codes(Q)
    xor = np.bitwise_xor(pb[:, None, :], pq[None, :, :])
    return _POPCOUNT[xor].sum(-1)


def assign_H(B, Q):
    """One-hot nearest-centroid assignment; ties go to the smallest index."""
    if B.shape[0] != Q.shape[0]:
        raise ValidationError(f"code length mismatch: B has {B.shape[0]} bits, Q has {Q.shape[0]}")
    d = hamming_matrix(B, Q)
    return one_hot(np.argmin(d, axis=1), Q.shape[1])


def qh_loss(B, Q, H):
    R = B - Q @ H
    return float(np.sum(R * R))


def penalized_loss(B, Q, H, rho):
    return qh_loss(B, Q, H) + rho * float(np.sum(Q.sum(0) ** 2))


def dplm_gradient(Q, B, H, rho):
    # d/dQ of -2 tr(B^T Q H) + rho ||Q^T 1||^2
    return -2.0 * B @ H.T + 2.0 * rho * np.ones((Q.shape[0], 1)) * Q.sum(0, keepdims=True)


def dplm_update_Q(Q_prev, B, H, rho, mu=1.0):
    """One discrete proximal linearized step: ``sgn(Q - grad / mu)``."""
    if mu <= 0:
        raise ValidationError("mu must be positive")
    return sgn(Q_prev - dplm_gradient(Q_prev, B, H, rho) / mu)


def rho_schedule(rounds, rho0=0.01, growth=2.0, rho_max=1e3):
    return [min(rho0 * growth**j, rho_max) for j in range(rounds)]


def init_centroids(B, c, seed):
    """Pick c distinct code columns, k-means++ style on Hamming distance."""
    rng = make_rng(seed)
    n = B.shape[1]
    chosen = [int(rng.integers(n))]
    d = hamming_matrix(B, B[:, chosen]).min(1).astype(float)
    while len(chosen) < c:
        w = d**2
        w[chosen] = 0.0
        if w.sum() == 0:
            # all remaining columns duplicate a chosen one; fall back to uniform
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(rest))
        else:
            nxt = int(rng.choice(n, p=w / w.sum()))
        chosen.append(nxt)
        d = np.minimum(d, hamming_matrix(B, B[:, [nxt]])[:, 0])
    return sgn(B[:, chosen])


def _repair_empty(B, Q, H):
    """Re-seed centroids that own no column from the worst-fitted column."""
    counts = H.sum(1)
    if np.all(counts > 0):
        return Q, H
    Q = Q.copy()
    for s in np.flatnonzero(counts == 0):
        labels = np.argmax(H, 0)
        dist = hamming_matrix(B, Q)[np.arange(B.shape[1]), labels]
        # only steal from clusters that keep at least one member
        sizes = H.sum(1)
        dist[sizes[labels] <= 1] = -1
        i = int(np.argmax(dist))
        if dist[i] <= 0:
            continue
        Q[:, s] = B[:, i]
        H = assign_H(B, Q)
    return Q, H


def refine_moves(B, labels, c, max_passes=20):
    """Single-column moves with majority-vote centroids until none helps.

    With H fixed the loss-optimal centroid is the bitwise majority, and the
    cluster cost is 2 * sum(n_s - |S_s|) for column sums S = B H^T, so each
    candidate move is scored exactly in O(b). Singletons never move.
    """
    labels = np.array(labels, dtype=np.int64)
    S = B @ one_hot(labels, c).T
    sizes = np.bincount(labels, minlength=c)
    b = B.shape[0]
    for _ in range(max_passes):
        moved = False
        for i in range(B.shape[1]):
            a = labels[i]
            if sizes[a] == 1:
                continue
            x = B[:, i]
            # cost change of a after removal plus that of each s after insertion
            out = np.abs(S[:, a]).sum() - np.abs(S[:, a] - x).sum() - b
            into = np.abs(S).sum(0) - np.abs(S + x[:, None]).sum(0) + b
            delta = 2.0 * (out + into)
            delta[a] = 0.0
            s = int(np.argmin(delta))
            if delta[s] < 0:
                S[:, a] -= x
                S[:, s] += x
                sizes[a] -= 1
                sizes[s] += 1
                labels[i] = s
                moved = True
        if not moved:
            break
    return sgn(S), one_hot(labels, c)


def solve_QH(B, c, rho=None, mu=1.0, max_inner=30, seed=0, Q_init=None, n_init=1, refine=True):
    """Alternate DPLM centroid steps and Hamming assignments.

    ``rho`` is a per-round penalty sequence (default doubling from 0.01).
    The best visited (Q, H) under ||B - QH||_F^2 is returned; iteration
    stops early once the assignment stops changing. With ``n_init > 1`` and
    no ``Q_init`` the whole procedure is restarted from fresh seeds and the
    lowest-loss result kept. ``refine`` polishes the best pair with
    single-column moves, which never increases the loss.
    """
    if n_init > 1 and Q_init is None:
        runs = [
            solve_QH(B, c, rho, mu, max_inner, s, None, 1, refine)
            for s in np.random.SeedSequence(seed).generate_state(n_init)
        ]
        return min(runs, key=lambda m: qh_loss(sgn(B), m.Q, m.H))
    B = sgn(B)
    n = B.shape[1]
    if not 1 <= c <= n:
        raise ValidationError(f"cluster count c={c} must lie in [1, {n}]")
    if rho is None:
        rho = rho_schedule(max_inner)
    rho = list(rho)
    if len(rho) < max_inner:
        rho += [rho[-1] if rho else 0.0] * (max_inner - len(rho))

    Q = init_centroids(B, c, seed) if Q_init is None else sgn(Q_init)
    H = assign_H(B, Q)
    Q, H = _repair_empty(B, Q, H)
    best = (qh_loss(B, Q, H), Q, H)
    history = [best[0]]
    for j in range(max_inner):
        Q = dplm_update_Q(Q, B, H, rho[j], mu)
        H_new = assign_H(B, Q)
        Q, H_new = _repair_empty(B, Q, H_new)
        loss = qh_loss(B, Q, H_new)
        history.append(loss)
        if loss < best[0]:
            best = (loss, Q, H_new)
        stable = np.array_equal(H_new, H)
        H = H_new
        if stable:
            break
    if refine:
        Q, H = refine_moves(B, np.argmax(best[2], 0), c)
        loss = qh_loss(B, Q, H)
        if loss < best[0]:
            best = (loss, Q, H)
            history.append(loss)
    return BinaryClusterModel(best[1], best[2], tuple(history))
