"""Ground truth and rank-comparison metrics for the evaluation harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import arithmetic_average
from .errors import DimensionError, DomainError, UndefinedAucError
from .graph import TrustGraph


@dataclass(frozen=True)
class RankReport:
    """One metric evaluation: name, value, the knobs used, and the sample size."""

    metric: str
    value: float
    params: dict = field(default_factory=dict)
    sample_size: int = 0


def variance_ground_truth(graph: TrustGraph) -> np.ndarray:
    """Per-node variance of given scores around each target's average score.

    Node ``i`` scores ``mean((w_ij - aa_j)^2)`` over its outgoing edges, where
    ``aa_j`` is the plain incoming average of the rated node; 0 with no
    out-edges. High variance marks raters who disagree with consensus, which
    serves as the reference ranking for bias.
    """
    aa = arithmetic_average(graph)
    diffs = graph.out_weights - aa[graph.out_dst]
    sums = np.bincount(graph.out_src, weights=diffs * diffs, minlength=graph.node_count)
    deg = graph.out_degree
    return np.divide(sums, deg, out=np.zeros(graph.node_count), where=deg > 0)


def _pair_vectors(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"score vectors differ in shape: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise DimensionError("need at least two entries")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("score vectors must be finite")
    return x, y


def _merge_count_inversions(values: list) -> int:
    """Pairs i<j with values[i] > values[j], by bottom-up merge sort."""
    buf = list(values)
    n = len(buf)
    total = 0
    width = 1
    while width < n:
        merged_all = []
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j = lo, mid
            merged = []
            while i < mid and j < hi:
                if buf[i] <= buf[j]:
                    merged.append(buf[i])
                    i += 1
                else:
                    total += mid - i
                    merged.append(buf[j])
                    j += 1
            merged.extend(buf[i:mid])
            merged.extend(buf[j:hi])
            merged_all.extend(merged)
        buf = merged_all
        width *= 2
    return total


def _tie_pair_count(sorted_values: np.ndarray) -> int:
    """Sum of C(run, 2) over runs of equal values in a sorted array."""
    if sorted_values.size == 0:
        return 0
    boundaries = np.flatnonzero(np.diff(sorted_values) != 0)
    counts = np.diff(np.concatenate(([0], boundaries + 1, [sorted_values.size])))
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau_b(x, y) -> float:
    """Tie-corrected Kendall rank correlation in [-1, 1].

    Uses an O(n log n) merge count of discordant pairs. Returns 0.0 when
    either vector is constant (the tie correction zeroes the denominator).
    """
    x, y = _pair_vectors(x, y)
    n = x.size
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]

    n0 = n * (n - 1) // 2
    tx = _tie_pair_count(xs)
    ty = _tie_pair_count(np.sort(y))
    pair_change = np.flatnonzero((np.diff(xs) != 0) | (np.diff(ys) != 0))
    counts = np.diff(np.concatenate(([0], pair_change + 1, [n])))
    txy = int((counts * (counts - 1) // 2).sum())

    discordant = _merge_count_inversions(ys.tolist())
    con_minus_dis = n0 - tx - ty + txy - 2 * discordant

    if n0 == tx or n0 == ty:
        return 0.0
    return con_minus_dis / math.sqrt((n0 - tx) * (n0 - ty))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ascending 1-based ranks, ties sharing the mean rank of their run."""
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)
    mean_rank = (upper - counts + 1 + upper) / 2.0
    return mean_rank[inverse]


def top_fraction_labels(truth, fraction: float) -> np.ndarray:
    """Boolean mask of the ceil(fraction*n) highest-truth nodes.

    Ties at the cutoff go to the lower node id, which keeps the label set
    deterministic.
    """
    truth = np.asarray(truth, dtype=np.float64)
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"fraction must lie in (0, 1), got {fraction}")
    n = truth.size
    n_pos = math.ceil(fraction * n)
    order = np.lexsort((np.arange(n), -truth))
    labels = np.zeros(n, dtype=bool)
    labels[order[:n_pos]] = True
    return labels


def auc_top_fraction(predicted, truth, fraction: float) -> float:
    """AUC for recovering the top-``fraction`` nodes of the truth ranking.

    Positives are the highest-truth nodes per :func:`top_fraction_labels`; the
    AUC is the Mann-Whitney statistic of the predicted scores with average
    ranks for ties, so any strictly increasing rescaling of ``predicted``
    leaves the value unchanged.
    """
    predicted, truth = _pair_vectors(predicted, truth)
    labels = top_fraction_labels(truth, fraction)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAucError(f"degenerate label split: {n_pos} positives, {n_neg} negatives")
    ranks = _average_ranks(predicted)
    u_stat = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))
