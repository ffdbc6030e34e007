"""RBF anchor mapping that takes every view to the same t dimensions."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ValidationError
from .linalg import make_rng

DEFAULT_ANCHORS = 300


@dataclass(frozen=True)
class KernelizedView:
    phi: np.ndarray
    eta: float
    anchor_indices: np.ndarray | None = None


def squared_distances(x, a):
    # cdist differences directly, so identical rows give exactly 0
    return cdist(x, a, metric="sqeuclidean")


def rbf_map(view, anchors, eta, anchor_indices=None):
    """``phi[i, j] = exp(-||x_i - a_j||^2 / eta)``."""
    view = np.asarray(view, dtype=float)
    anchors = np.asarray(anchors, dtype=float)
    if not eta > 0:
        raise ValidationError(f"kernel width must be positive, got {eta}")
    if view.ndim != 2 or anchors.ndim != 2 or view.shape[1] != anchors.shape[1]:
        raise ValidationError(
            f"anchor dims {anchors.shape} do not match view dims {view.shape}"
        )
    d2 = squared_distances(view, anchors)
    # far pairs would underflow to 0; keep entries strictly positive
    phi = np.maximum(np.exp(-d2 / eta), np.finfo(float).tiny)
    return KernelizedView(phi, float(eta), anchor_indices)


def estimate_kernel_width(view, anchors, sample_pairs=10000, seed=0):
    """Mean squared sample-anchor distance over pairs that do not coincide.

    All pairs are used when there are at most ``sample_pairs`` of them;
    otherwise that many pairs are drawn uniformly with replacement. Returns
    1.0 when every considered pair has distance zero.
    """
    view = np.asarray(view, dtype=float)
    anchors = np.asarray(anchors, dtype=float)
    n, t = view.shape[0], anchors.shape[0]
    if n * t <= sample_pairs:
        d2 = squared_distances(view, anchors).ravel()
    else:
        rng = make_rng(seed)
        i = rng.integers(0, n, size=sample_pairs)
        j = rng.integers(0, t, size=sample_pairs)
        d2 = ((view[i] - anchors[j]) ** 2).sum(1)
    d2 = d2[d2 > 0]
    if d2.size == 0:
        return 1.0
    return float(d2.mean())
