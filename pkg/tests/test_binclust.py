import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcae.binclust import (
    assign_H,
    dplm_update_Q,
    hamming_distance,
    hamming_matrix,
    one_hot,
    penalized_loss,
    qh_loss,
    refine_moves,
    sgn,
    solve_QH,
)
from gcae.errors import ValidationError


def random_codes(b, n, seed):
    return sgn(np.random.default_rng(seed).standard_normal((b, n)))


def exhaustive_qh_optimum(B, c):
    """Global min of ||B - QH||^2 over all +-1 Q with the induced best H."""
    b = B.shape[0]
    best = np.inf
    for bits in itertools.product((-1.0, 1.0), repeat=b * c):
        Q = np.array(bits).reshape(b, c)
        # per column: 4 * min Hamming distance
        d = np.array([[np.sum(B[:, i] != Q[:, s]) for s in range(c)] for i in range(B.shape[1])])
        best = min(best, 4.0 * d.min(1).sum())
    return best


def test_hamming_examples():
    x = np.array([1, 1, -1])
    assert hamming_distance(x, x) == 0
    assert hamming_distance(x, -x) == 3
    assert hamming_distance([1, 1, -1], [1, -1, -1]) == 1
    with pytest.raises(ValidationError):
        hamming_distance([1, 1], [1, 1, 1])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 200), st.integers(0, 2**31 - 1))
def test_hamming_inner_product_identity(b, seed):
    rng = np.random.default_rng(seed)
    x, y = sgn(rng.standard_normal(b)), sgn(rng.standard_normal(b))
    assert hamming_distance(x, y) == (b - x @ y) / 2
    # packed popcount scan agrees with the direct count
    assert hamming_matrix(x[:, None], y[:, None])[0, 0] == hamming_distance(x, y)


def test_assign_exact_match_and_single_cluster():
    B = random_codes(8, 5, 0)
    Q = np.column_stack([B[:, 2], -B[:, 2]])
    H = assign_H(B, Q)
    assert H[0, 2] == 1 and H[:, 2].sum() == 1
    H1 = assign_H(B, random_codes(8, 1, 1))
    assert np.all(H1 == 1)


def test_assign_matches_scalar_scan():
    B = random_codes(8, 20, 2)
    Q = random_codes(8, 3, 3)
    H = assign_H(B, Q)
    for i in range(20):
        dists = [sum(B[k, i] != Q[k, s] for k in range(8)) for s in range(3)]
        best = min(dists)
        expect = dists.index(best)  # first index wins ties
        assert H[expect, i] == 1 and H[:, i].sum() == 1
        # the inner-product argmax picks the same centroid
        assert np.argmax(Q.T @ B[:, i]) == expect


def test_assign_is_block_minimizer():
    B = random_codes(16, 40, 4)
    Q = random_codes(16, 5, 5)
    H = assign_H(B, Q)
    base = qh_loss(B, Q, H)
    labels = np.argmax(H, 0)
    for i in range(40):
        for s in range(5):
            alt = labels.copy()
            alt[i] = s
            assert base <= qh_loss(B, Q, one_hot(alt, 5))


@settings(max_examples=50, deadline=None)
@given(b=st.integers(1, 40), n=st.integers(1, 30), c=st.integers(1, 6), seed=st.integers(0, 2**31 - 1))
def test_loss_equals_four_times_hamming(b, n, c, seed):
    B, Q = random_codes(b, n, seed), random_codes(b, c, seed + 1)
    labels = np.random.default_rng(seed).integers(0, c, n)
    H = one_hot(labels, c)
    ham = sum(hamming_distance(B[:, i], Q[:, labels[i]]) for i in range(n))
    assert qh_loss(B, Q, H) == 4 * ham


def test_dplm_fixed_point():
    b, c, n = 4, 2, 6
    B = np.ones((b, n))
    H = one_hot([0, 0, 0, 1, 1, 1], c)
    Q = dplm_update_Q(np.ones((b, c)), B, H, rho=0.0, mu=1.0)
    assert np.all(Q == 1)


def test_dplm_dominant_gradient():
    rng = np.random.default_rng(0)
    B = random_codes(6, 30, 1)
    H = one_hot(rng.integers(0, 3, 30), 3)
    BH = B @ H.T
    mu = 1.0
    Q_prev = random_codes(6, 3, 2)
    mask = np.abs(BH) > mu / 2
    Q = dplm_update_Q(Q_prev, B, H, rho=0.0, mu=mu)
    np.testing.assert_array_equal(Q[mask], sgn(BH)[mask])


def test_dplm_best_visited_not_worse():
    B = random_codes(2, 4, 5)
    H = one_hot([0, 1, 0, 1], 2)
    Q0 = random_codes(2, 2, 6)
    rho = 0.1
    start = penalized_loss(B, Q0, H, rho)
    Q, visited = Q0, []
    for _ in range(10):
        Q = dplm_update_Q(Q, B, H, rho)
        visited.append(penalized_loss(B, Q, H, rho))
    assert min(visited) <= start
    global_best = min(
        penalized_loss(B, np.array(bits).reshape(2, 2), H, rho)
        for bits in itertools.product((-1.0, 1.0), repeat=4)
    )
    assert min(visited) >= global_best


def test_dplm_rejects_bad_mu():
    with pytest.raises(ValidationError):
        dplm_update_Q(np.ones((2, 2)), np.ones((2, 3)), one_hot([0, 1, 0], 2), 0.0, mu=0.0)


def test_solve_separable_groups():
    centers = random_codes(12, 3, 7)
    labels = np.repeat([0, 1, 2], 10)
    B = centers[:, labels]
    model = solve_QH(B, 3, seed=0)
    assert qh_loss(B, model.Q, model.H) == 0
    # grouping recovered up to relabeling
    pred = model.labels
    for g in range(3):
        assert len(set(pred[labels == g])) == 1
    assert len(set(pred)) == 3


def test_solve_one_centroid_per_column():
    B = random_codes(6, 7, 8)
    model = solve_QH(B, 7, seed=1)
    assert qh_loss(B, model.Q, model.H) == 0


def test_solve_rejects_too_many_clusters():
    with pytest.raises(ValidationError):
        solve_QH(random_codes(4, 3, 0), 4)


@pytest.mark.parametrize("seed", range(20))
def test_solve_near_exhaustive_optimum(seed):
    # restart count as used by the pipeline
    B = random_codes(4, 6, 100 + seed)
    model = solve_QH(B, 2, seed=seed, n_init=10)
    best = exhaustive_qh_optimum(B, 2)
    assert qh_loss(B, model.Q, model.H) <= 1.1 * best


def majority_loss(B, labels, c):
    H = one_hot(labels, c)
    return qh_loss(B, sgn(B @ H.T), H)


def test_refine_reaches_single_move_optimum():
    rng = np.random.default_rng(11)
    for trial in range(20):
        B = random_codes(10, 15, 300 + trial)
        labels = np.arange(15) % 3
        rng.shuffle(labels)
        start = majority_loss(B, labels, 3)
        Q, H = refine_moves(B, labels, 3)
        out = np.argmax(H, 0)
        final = qh_loss(B, Q, H)
        assert final <= start
        assert final == majority_loss(B, out, 3)
        # no single move from a non-singleton cluster helps any more
        sizes = np.bincount(out, minlength=3)
        for i in range(15):
            if sizes[out[i]] == 1:
                continue
            for s in range(3):
                alt = out.copy()
                alt[i] = s
                assert majority_loss(B, alt, 3) >= final


def test_solve_model_invariants():
    B = random_codes(32, 80, 9)
    model = solve_QH(B, 4, seed=3)
    assert np.all(np.abs(model.Q) == 1)
    assert np.all(model.H.sum(0) == 1)
    assert np.all(model.H.sum(1) > 0)  # no empty clusters after repair
    # returned pair is at least as good as the initial assignment
    assert qh_loss(B, model.Q, model.H) <= model.history[0]


def test_solve_deterministic():
    B = random_codes(16, 50, 10)
    a, b = solve_QH(B, 3, seed=4), solve_QH(B, 3, seed=4)
    np.testing.assert_array_equal(a.Q, b.Q)
    np.testing.assert_array_equal(a.H, b.H)


def test_balance_diagnostic_reported():
    # reported only: mean |Q^T 1| under small vs large rho on random instances
    small, large = [], []
    for s in range(10):
        B = random_codes(16, 60, 200 + s)
        small.append(np.abs(solve_QH(B, 4, rho=[0.0] * 30, seed=s).Q.sum(0)).mean())
        large.append(np.abs(solve_QH(B, 4, rho=[50.0] * 30, seed=s).Q.sum(0)).mean())
    print(f"mean |Q^T 1|: rho=0 -> {np.mean(small):.2f}, rho=50 -> {np.mean(large):.2f}")
