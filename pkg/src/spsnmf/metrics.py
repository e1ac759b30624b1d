"""External clustering quality measures: ACC, NMI and ARI."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import comb

from ._errors import LengthMismatch

__all__ = ["ContingencyTable", "contingency", "accuracy", "nmi", "ari"]


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray

    @property
    def row_sums(self):
        return self.counts.sum(axis=1)

    @property
    def col_sums(self):
        return self.counts.sum(axis=0)

    @property
    def total(self):
        return int(self.counts.sum())


def _pair(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise LengthMismatch(f"label vectors differ in length: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise LengthMismatch("label vectors are empty")
    return pred, truth


def contingency(pred, truth):
    """Counts of samples per (predicted class, true class) pair.

    Class ids are mapped to ``0..r-1`` and ``0..c-1`` in sorted order.
    """
    pred, truth = _pair(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    counts = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(counts, (p, t), 1)
    return ContingencyTable(counts)


def accuracy(pred, truth):
    """Share of samples matched under the best one-to-one class mapping."""
    C = contingency(pred, truth).counts
    size = max(C.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:C.shape[0], :C.shape[1]] = C
    rows, cols = linear_sum_assignment(-padded)
    return float(padded[rows, cols].sum()) / C.sum()


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def _same_partition(C):
    # identical up to relabeling <=> square table with one nonzero per row and column
    nz = C > 0
    return C.shape[0] == C.shape[1] and np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)


def nmi(pred, truth):
    """Mutual information normalized by the geometric mean of the entropies.

    Two partitions that agree up to relabeling score 1, including the case of
    one cluster on both sides.  Otherwise a zero entropy on either side
    gives 0.
    """
    C = contingency(pred, truth).counts
    if _same_partition(C):
        return 1.0
    h_pred = _entropy(C.sum(axis=1))
    h_truth = _entropy(C.sum(axis=0))
    if h_pred == 0.0 or h_truth == 0.0:
        return 0.0
    n = C.sum()
    i, j = np.nonzero(C)
    nij = C[i, j].astype(np.float64)
    a = C.sum(axis=1)[i].astype(np.float64)
    b = C.sum(axis=0)[j].astype(np.float64)
    mi = float(np.sum(nij / n * (np.log(nij * n) - np.log(a * b))))
    return float(np.clip(mi / np.sqrt(h_pred * h_truth), 0.0, 1.0))


def ari(pred, truth):
    """Adjusted Rand index under the permutation model; may be negative."""
    C = contingency(pred, truth).counts
    n = C.sum()
    sum_cells = float(comb(C, 2).sum())
    sum_rows = float(comb(C.sum(axis=1), 2).sum())
    sum_cols = float(comb(C.sum(axis=0), 2).sum())
    expected = sum_rows * sum_cols / comb(n, 2) if n > 1 else 0.0
    denom = 0.5 * (sum_rows + sum_cols) - expected
    if denom == 0.0:
        return 1.0 if _same_partition(C) else 0.0
    return (sum_cells - expected) / denom
