"""Random-projection hashing baseline.

Kernelized views are concatenated and column-centered, projected by a
seeded random row-orthonormal matrix, signed into codes, and clustered
with the same Hamming-space solver GCAE uses. No graphs are built.
"""

import numpy as np

from .binclust import sgn, solve_QH
from .encoder import kernelize
from .errors import ValidationError
from .linalg import random_row_orthonormal


def random_projection_codes(ds, hyper):
    X = np.hstack([kv.phi for kv in kernelize(ds, hyper)])
    X = X - X.mean(0)
    if hyper.b > X.shape[1]:
        raise ValidationError(
            f"baseline needs b <= total kernel dimension ({X.shape[1]}), got b={hyper.b}"
        )
    W = random_row_orthonormal(hyper.b, X.shape[1], hyper.seed)
    return sgn(W @ X.T)


def run_baseline(ds, hyper, n_clusters):
    B = random_projection_codes(ds, hyper)
    model = solve_QH(B, n_clusters, hyper.rho_schedule(), hyper.mu, hyper.qh_iter,
                     hyper.seed, n_init=hyper.qh_restarts)
    return B, model
