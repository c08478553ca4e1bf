"""Clustering evaluation: matched accuracy and pair-counting F-score."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "MetricsReport",
    "hungarian",
    "clustering_accuracy",
    "pairwise_fscore",
    "evaluate",
]


@dataclass
class MetricsReport:
    acc: float
    fscore: float
    pair_precision: float
    pair_recall: float


def hungarian(cost):
    """Minimum-cost assignment on a square cost matrix.

    Returns the (row, col) pairs sorted by row. Rectangular confusion
    matrices must be zero-padded to square by the caller.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError("cost matrix must be square")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    rows, cols = linear_sum_assignment(cost)
    return list(zip(rows.tolist(), cols.tolist()))


def _dense(labels):
    labels = np.asarray(labels).ravel()
    _, dense = np.unique(labels, return_inverse=True)
    return dense


def _contingency(pred, truth):
    p = _dense(pred)
    t = _dense(truth)
    M = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(M, (p, t), 1)
    return M


def clustering_accuracy(pred, truth):
    """Fraction of samples matched under the best injective mapping of
    predicted clusters onto true clusters (optimal assignment on the
    confusion matrix)."""
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must have equal length")
    if pred.size == 0:
        raise ValueError("need at least one sample")
    M = _contingency(pred, truth)
    side = max(M.shape)
    padded = np.zeros((side, side), dtype=np.int64)
    padded[: M.shape[0], : M.shape[1]] = M
    pairs = hungarian(padded.max() - padded)
    matched = sum(int(padded[r, c]) for r, c in pairs)
    return matched / pred.size


def pairwise_fscore(pred, truth):
    """Pair-counting (fscore, precision, recall) over all sample pairs.

    A pair is positive when both samples share a cluster; precision is
    computed over pairs co-clustered in pred, recall over pairs
    co-clustered in truth. Empty denominators yield 0.
    """
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must have equal length")
    if pred.size < 2:
        raise ValueError("need at least two samples")
    M = _contingency(pred, truth).astype(float)

    def _pairs(counts):
        return float(np.sum(counts * (counts - 1.0) / 2.0))

    tp = _pairs(M)
    pred_pairs = _pairs(M.sum(axis=1))
    truth_pairs = _pairs(M.sum(axis=0))
    precision = tp / pred_pairs if pred_pairs > 0 else 0.0
    recall = tp / truth_pairs if truth_pairs > 0 else 0.0
    if precision + recall > 0:
        fscore = 2.0 * precision * recall / (precision + recall)
    else:
        fscore = 0.0
    return fscore, precision, recall


def evaluate(pred, truth):
    """Bundle both metrics into a MetricsReport."""
    fscore, precision, recall = pairwise_fscore(pred, truth)
    return MetricsReport(
        acc=clustering_accuracy(pred, truth),
        fscore=fscore,
        pair_precision=precision,
        pair_recall=recall,
    )
