"""Partition agreement metrics and trial aggregation.

NMI uses natural-log entropies normalized by the arithmetic mean
``2 I(A;B) / (H(A) + H(B))``; this normalization changes absolute values
relative to max- or sqrt-normalized variants, so it is fixed here once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.stats import norm

from .errors import EmptyMask, LengthMismatch, TooFewSamples


@dataclass(frozen=True)
class AggregateStat:
    mean: float
    half_width: float
    n_trials: int
    degenerate: bool = False


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _check_pair(a, b):
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"label vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise LengthMismatch("label vectors are empty")
    return a, b


def nmi(a, b) -> float:
    """Normalized mutual information in [0, 1] between two partitions.

    Returns 0 when either partition has zero entropy (single cluster).
    """
    a, b = _check_pair(a, b)
    n = a.shape[0]
    table = _contingency(a, b)
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    ha = -np.sum(pa * np.log(pa, where=pa > 0, out=np.zeros_like(pa)))
    hb = -np.sum(pb * np.log(pb, where=pb > 0, out=np.zeros_like(pb)))
    if ha + hb == 0.0:
        return 0.0
    pij = table / n
    outer = np.outer(pa, pb)
    mask = pij > 0
    mi = float(np.sum(pij[mask] * np.log(pij[mask] / outer[mask])))
    value = 2.0 * mi / (ha + hb)
    return float(min(max(value, 0.0), 1.0))


def clustering_accuracy(a, b) -> float:
    """Best label-agreement fraction over bijective cluster relabelings.

    Solved as a linear assignment on the negated contingency table; the
    cluster count is capped at 64 per side.
    """
    a, b = _check_pair(a, b)
    table = _contingency(a, b)
    if max(table.shape) > 64:
        raise LengthMismatch("more than 64 clusters in one partition")
    r, c = linear_sum_assignment(-table)
    return float(table[r, c].sum() / a.shape[0])


def classification_accuracy(pred, truth, eval_mask) -> float:
    """Fraction of masked nodes with pred == truth; labels are not relabeled."""
    pred, truth = _check_pair(pred, truth)
    mask = np.asarray(eval_mask, dtype=bool).ravel()
    if mask.shape[0] != pred.shape[0]:
        raise LengthMismatch("mask length does not match labels")
    if not mask.any():
        raise EmptyMask("evaluation mask selects no nodes")
    return float(np.mean(pred[mask] == truth[mask]))


def aggregate(samples, confidence: float = 0.95) -> AggregateStat:
    """Mean and normal-approximation confidence half-width z * sd / sqrt(n)."""
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.shape[0] < 2:
        raise TooFewSamples("need at least 2 samples to aggregate")
    z = norm.ppf(0.5 + confidence / 2.0)
    sd = float(np.std(samples, ddof=1))
    return AggregateStat(
        mean=float(samples.mean()),
        half_width=float(z * sd / np.sqrt(samples.shape[0])),
        n_trials=samples.shape[0],
    )


def aggregate_or_single(samples, confidence: float = 0.95) -> AggregateStat:
    """Like aggregate, but a single sample yields half_width 0 with a flag."""
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.shape[0] == 1:
        return AggregateStat(
            mean=float(samples[0]), half_width=0.0, n_trials=1, degenerate=True
        )
    return aggregate(samples, confidence)
