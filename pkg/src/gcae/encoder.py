"""Graph-collaborated auto-encoder hashing.

Per view v the encoder keeps an affinity graph Z^v (N x N) and a
row-orthonormal projection W^v (b x N); all views share one code matrix B
(b x N, entries +-1) and are mixed by simplex weights p. The objective is

    sum_v ||F^v G^vT - Z^v||^2
          + (p^v)^k (||W^v Z^v - B||^2 + ||Z^v - W^vT B||^2)
    + lambda ||B - Q H||^2

and :func:`run_gcae` minimizes it block by block in the order
Z, W, B, (Q, H), p.
"""

import logging
from dataclasses import dataclass, field, fields

import numpy as np

from . import binclust
from .binclust import sgn, solve_QH
from .data import MultiViewDataset, sample_anchors
from .errors import NumericalError, ValidationError
from .graphs import DEFAULT_ITER, DEFAULT_THETA, FactorPair, learn_factors
from .kernel import DEFAULT_ANCHORS, estimate_kernel_width, rbf_map
from .linalg import compact_svd, make_rng, random_row_orthonormal, solve_smoothed

log = logging.getLogger(__name__)


@dataclass
class Hyperparameters:
    lam: float = 1e-5
    k: int = 5
    t: int = DEFAULT_ANCHORS
    eta: float | None = None  # None: mean squared sample-anchor distance
    theta: float = DEFAULT_THETA
    b: int = 128
    r: int = 100
    rho0: float = 0.01
    rho_max: float = 1e3
    mu: float = 1.0
    inner_iter: int = DEFAULT_ITER
    outer_iter: int = 30
    qh_iter: int = 30
    qh_restarts: int = 10
    seed: int = 0

    def validate(self, n_samples=None):
        if self.lam < 0:
            raise ValidationError("lambda must be non-negative")
        if int(self.k) != self.k or self.k < 2:
            raise ValidationError("k >= 2 is required (exponent 1/(1-k))")
        if self.eta is not None and not self.eta > 0:
            raise ValidationError("eta must be positive")
        if self.theta < 0:
            raise ValidationError("theta must be non-negative")
        if self.b < 1:
            raise ValidationError("b >= 1 is required")
        if self.r < 1 or self.t < 1:
            raise ValidationError("r and t must be positive")
        if self.mu <= 0:
            raise ValidationError("mu must be positive")
        if self.rho0 < 0 or self.rho_max < 0:
            raise ValidationError("rho must be non-negative")
        if min(self.inner_iter, self.qh_iter) < 1 or self.outer_iter < 0:
            raise ValidationError("iteration counts must be positive")
        if n_samples is not None:
            if self.r > n_samples:
                raise ValidationError(f"r={self.r} exceeds N={n_samples}")
            if self.b > n_samples:
                raise ValidationError(f"b={self.b} exceeds N={n_samples}")
        return self

    def anchors_for(self, n_samples):
        return min(self.t, n_samples)

    def rho_schedule(self):
        return binclust.rho_schedule(self.qh_iter, self.rho0, 2.0, self.rho_max)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


@dataclass
class EncoderState:
    Z: list
    W: list
    B: np.ndarray
    p: np.ndarray
    hyper: Hyperparameters

    def decorrelation(self):
        """||B B^T / N - I||_F, reported but not enforced."""
        n = self.B.shape[1]
        return float(np.linalg.norm(self.B @ self.B.T / n - np.eye(self.B.shape[0])))


@dataclass
class LossTrajectory:
    total: list = field(default_factory=list)
    graph: list = field(default_factory=list)
    autoencoder: list = field(default_factory=list)
    cluster: list = field(default_factory=list)

    def append(self, parts):
        self.total.append(parts["total"])
        self.graph.append(parts["graph"])
        self.autoencoder.append(parts["autoencoder"])
        self.cluster.append(parts["cluster"])

    def __len__(self):
        return len(self.total)

    def rows(self):
        return list(zip(range(len(self)), self.total, self.graph, self.autoencoder, self.cluster))


def update_Z(fp, W, B, p_v, k, theta=0.0):
    """Exact minimizer of the per-view Z subproblem.

    ``((p^k) W^T W + (1 + p^k) I) Z = F G^T + 2 p^k W^T B``. The smoothing
    ``theta`` is added to the diagonal shift and is 0 by default since the
    system is always positive definite.
    """
    if p_v <= 0:
        raise ValidationError("view weight must be positive")
    a = float(p_v) ** k
    FG = fp.graph() if isinstance(fp, FactorPair) else np.asarray(fp, dtype=float)
    return solve_smoothed(a * (W.T @ W), FG + 2.0 * a * (W.T @ B), 1.0 + a + theta)


def update_W(Z, B):
    """Procrustes maximizer of tr(W Z B^T) over row-orthonormal W."""
    if B.shape[0] > Z.shape[0]:
        raise ValidationError(f"code length b={B.shape[0]} exceeds N={Z.shape[0]}")
    U, _, V = compact_svd(Z @ B.T)
    return V @ U.T


def code_argument(Zs, Ws, p, k, lam, QH):
    arg = lam * np.asarray(QH, dtype=float)
    for Z, W, pv in zip(Zs, Ws, p):
        arg = arg + 2.0 * pv**k * (W @ Z)
    return arg


def update_B(Zs, Ws, p, k, lam, QH):
    """``sgn(sum_v 2 (p^v)^k W^v Z^v + lambda Q H)`` with sgn(0) = +1."""
    return sgn(code_argument(Zs, Ws, p, k, lam, QH))


def update_p(losses, k):
    """Closed-form simplex weights ``p^v ∝ (a^v)^(1/(1-k))``.

    Views with zero loss share all the weight when any exist. Computed in
    log space so the result is invariant to rescaling the losses.
    """
    a = np.asarray(losses, dtype=float)
    if k < 2:
        raise ValidationError("k >= 2 is required")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise NumericalError("view losses must be finite and non-negative")
    zero = a == 0
    if zero.any():
        return zero / zero.sum()
    e = np.log(a) / (1.0 - k)
    w = np.exp(e - e.max())
    return w / w.sum()


def view_losses(Zs, Ws, B):
    out = []
    for Z, W in zip(Zs, Ws):
        r1 = W @ Z - B
        r2 = Z - W.T @ B
        out.append(float(np.sum(r1 * r1) + np.sum(r2 * r2)))
    return np.array(out)


def loss_terms(state, factors, Q, H, lam, k):
    graph = sum(float(np.sum((fp.graph() - Z) ** 2)) for fp, Z in zip(factors, state.Z))
    ae = float(np.sum(state.p**k * view_losses(state.Z, state.W, state.B)))
    cl = lam * binclust.qh_loss(state.B, Q, H)
    return {"total": graph + ae + cl, "graph": graph, "autoencoder": ae, "cluster": cl}


def total_loss(state, factors, Q, H, lam, k):
    return loss_terms(state, factors, Q, H, lam, k)["total"]


def kernelize(ds, hyper):
    """RBF-map every view onto the same shared anchor indices."""
    t = hyper.anchors_for(ds.n_samples)
    anchors = sample_anchors(ds, t, hyper.seed)
    out = []
    for v, (x, a) in enumerate(zip(ds.views, anchors.anchors)):
        eta = hyper.eta
        if eta is None:
            eta = estimate_kernel_width(x, a, seed=hyper.seed + v)
        out.append(rbf_map(x, a, eta, anchors.indices))
    return out


def _check(name, *arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericalError(f"non-finite values after {name} update")


def run_gcae(ds, hyper, n_clusters, factors=None):
    """Fit codes and Hamming-space clusters.

    Returns ``(EncoderState, BinaryClusterModel, LossTrajectory)``. The
    trajectory holds the loss at initialization followed by the loss after
    each outer iteration. ``factors`` may be passed to skip graph learning.
    """
    if not isinstance(ds, MultiViewDataset):
        ds = MultiViewDataset(tuple(ds))
    n = ds.n_samples
    hyper.validate(n)
    seed = hyper.seed

    if factors is None:
        phis = kernelize(ds, hyper)
        factors = [
            learn_factors(phi, hyper.r, hyper.theta, hyper.inner_iter, seed + 101 * v)
            for v, phi in enumerate(phis)
        ]
    m = len(factors)

    rng = make_rng(seed)
    B = sgn(rng.standard_normal((hyper.b, n)))
    qh_seed = int(rng.integers(2**31))
    Ws = [random_row_orthonormal(hyper.b, n, int(rng.integers(2**31))) for _ in range(m)]
    Zs = [fp.graph() for fp in factors]
    p = np.full(m, 1.0 / m)
    state = EncoderState(Zs, Ws, B, p, hyper)
    rho = hyper.rho_schedule()
    model = solve_QH(B, n_clusters, rho, hyper.mu, hyper.qh_iter, qh_seed)

    traj = LossTrajectory()
    traj.append(loss_terms(state, factors, model.Q, model.H, hyper.lam, hyper.k))
    for it in range(hyper.outer_iter):
        state.Z = [update_Z(fp, W, state.B, pv, hyper.k) for fp, W, pv in zip(factors, state.W, state.p)]
        _check("Z", *state.Z)
        state.W = [update_W(Z, state.B) for Z in state.Z]
        _check("W", *state.W)
        state.B = update_B(state.Z, state.W, state.p, hyper.k, hyper.lam, model.reconstruction())
        # centroids fitted to the random initial codes are meaningless; re-seed once
        model = solve_QH(state.B, n_clusters, rho, hyper.mu, hyper.qh_iter, qh_seed + it + 1,
                         Q_init=model.Q if it > 0 else None, n_init=hyper.qh_restarts if it == 0 else 1)
        state.p = update_p(view_losses(state.Z, state.W, state.B), hyper.k)
        _check("p", state.p)
        parts = loss_terms(state, factors, model.Q, model.H, hyper.lam, hyper.k)
        if not np.isfinite(parts["total"]):
            raise NumericalError(f"non-finite loss at outer iteration {it + 1}")
        traj.append(parts)
        log.debug("iter %d loss %.6g", it + 1, parts["total"])
    return state, model, traj
