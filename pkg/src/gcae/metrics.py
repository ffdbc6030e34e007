"""External clustering measures: ACC, NMI, Purity, F-score, Precision, ARI.

Conventions:
  * ACC uses an optimal one-to-one matching of clusters to classes on the
    (square-padded) contingency table.
  * NMI = I(T; P) / sqrt(H(T) H(P)); when either entropy is zero it is 1
    for identical partitions and 0 otherwise.
  * Pair-counting scores treat 0/0 as 0 and record a warning.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ValidationError

METRIC_NAMES = ("ACC", "NMI", "Purity", "F-score", "Precision", "ARI")


class ZeroDivisionMetricWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LabelPair:
    truth: np.ndarray
    predicted: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.truth).ravel()
        p = np.asarray(self.predicted).ravel()
        if t.shape != p.shape:
            raise ValidationError(f"length mismatch: {t.size} truth vs {p.size} predicted labels")
        if t.size == 0:
            raise ValidationError("empty label vectors")
        object.__setattr__(self, "truth", np.unique(t, return_inverse=True)[1].ravel())
        object.__setattr__(self, "predicted", np.unique(p, return_inverse=True)[1].ravel())

    @property
    def n(self):
        return self.truth.size


def _pair(truth, predicted=None):
    if isinstance(truth, LabelPair):
        return truth
    return LabelPair(truth, predicted)


def contingency(lp):
    """Classes along rows, predicted clusters along columns."""
    C = np.zeros((lp.truth.max() + 1, lp.predicted.max() + 1), dtype=np.int64)
    np.add.at(C, (lp.truth, lp.predicted), 1)
    return C


def accuracy(truth, predicted=None):
    lp = _pair(truth, predicted)
    C = contingency(lp)
    size = max(C.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: C.shape[0], : C.shape[1]] = C
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum()) / lp.n


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(truth, predicted=None):
    lp = _pair(truth, predicted)
    C = contingency(lp)
    n = lp.n
    h_t = _entropy(C.sum(1), n)
    h_p = _entropy(C.sum(0), n)
    if h_t == 0 or h_p == 0:
        return 1.0 if h_t == h_p else 0.0
    pij = C / n
    outer = np.outer(C.sum(1), C.sum(0)) / n**2
    nz = pij > 0
    mi = float((pij[nz] * np.log(pij[nz] / outer[nz])).sum())
    return min(max(mi / np.sqrt(h_t * h_p), 0.0), 1.0)


def purity(truth, predicted=None):
    lp = _pair(truth, predicted)
    return float(contingency(lp).max(0).sum()) / lp.n


def _comb2(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def pair_counts(truth, predicted=None):
    """(TP, FP, FN, TN) over unordered sample pairs."""
    lp = _pair(truth, predicted)
    C = contingency(lp)
    tp = int(_comb2(C).sum())
    together_pred = int(_comb2(C.sum(0)).sum())
    together_true = int(_comb2(C.sum(1)).sum())
    total = int(_comb2(lp.n))
    fp = together_pred - tp
    fn = together_true - tp
    return tp, fp, fn, total - tp - fp - fn


def _ratio(num, den, what):
    if den == 0:
        warnings.warn(f"{what} is 0/0; reported as 0", ZeroDivisionMetricWarning, stacklevel=3)
        return 0.0
    return num / den


def ari_from_pairs(tp, fp, fn, tn):
    total = tp + fp + fn + tn
    if total == 0:
        return 1.0
    pred, true = tp + fp, tp + fn
    expected = pred * true / total
    max_index = 0.5 * (pred + true)
    if max_index == expected:
        # both partitions trivial in the same way
        return 1.0
    return (tp - expected) / (max_index - expected)


def ari_from_contingency(C):
    """Hubert-Arabie ARI written directly on the contingency table."""
    C = np.asarray(C, dtype=np.int64)
    n = int(C.sum())
    sum_ij = float(_comb2(C).sum())
    sum_a = float(_comb2(C.sum(1)).sum())
    sum_b = float(_comb2(C.sum(0)).sum())
    total = float(_comb2(n))
    expected = sum_a * sum_b / total if total else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return (sum_ij - expected) / (max_index - expected)


def fscore_precision_ari(truth, predicted=None):
    tp, fp, fn, tn = pair_counts(truth, predicted)
    precision = _ratio(tp, tp + fp, "precision")
    recall = _ratio(tp, tp + fn, "recall")
    f = _ratio(2 * precision * recall, precision + recall, "F-score")
    return f, precision, ari_from_pairs(tp, fp, fn, tn)


def evaluate(truth, predicted):
    """All six measures plus the list of 0/0 warnings raised on the way."""
    lp = LabelPair(truth, predicted)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ZeroDivisionMetricWarning)
        f, p, ari = fscore_precision_ari(lp)
    scores = {
        "ACC": accuracy(lp),
        "NMI": nmi(lp),
        "Purity": purity(lp),
        "F-score": f,
        "Precision": p,
        "ARI": ari,
    }
    return scores, [str(w.message) for w in caught]
