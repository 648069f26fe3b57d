"""Reference prestige rankers: arithmetic average, HITS authority, PageRank.

HITS and PageRank cannot use distrust edges, so on signed graphs the
negative-weight edges are removed first; zero-weight edges stay (they carry
no mass but an incoming zero still counts toward a node's average elsewhere).
Both accept ``weighted=False`` to binarize the surviving edges.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import DomainError
from .graph import TrustGraph


def arithmetic_average(graph: TrustGraph) -> np.ndarray:
    """Mean incoming trust score per node; 0 for nodes nobody rates."""
    sums = np.bincount(graph.in_dst, weights=graph.in_weights, minlength=graph.node_count)
    deg = graph.in_degree
    return np.divide(sums, deg, out=np.zeros(graph.node_count), where=deg > 0)


def _nonnegative_edges(graph: TrustGraph, weighted: bool):
    mask = graph.out_weights >= 0.0
    src = graph.out_src[mask]
    dst = graph.out_dst[mask]
    w = graph.out_weights[mask] if weighted else np.ones(int(mask.sum()))
    return src, dst, w


def hits_authority(
    graph: TrustGraph,
    tolerance: float = 1e-8,
    max_iterations: int = 200,
    *,
    weighted: bool = True,
) -> np.ndarray:
    """Authority scores from the mutual hub/authority reinforcement.

    Each round recomputes authorities from hub scores and hubs from the fresh
    authorities, L2-normalizing both, until the authority vector moves less
    than ``tolerance`` in max norm. Degenerate graphs (no usable edges, or a
    vanishing authority vector) return all zeros with a warning.
    """
    n = graph.node_count
    src, dst, w = _nonnegative_edges(graph, weighted)
    if src.size == 0:
        warnings.warn("no non-negative edges; returning zero authority scores")
        return np.zeros(n)

    hubs = np.full(n, 1.0 / np.sqrt(n))
    auth = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(max_iterations):
        new_auth = np.bincount(dst, weights=w * hubs[src], minlength=n)
        norm = np.linalg.norm(new_auth)
        if norm == 0.0:
            warnings.warn("authority vector vanished; returning zero scores")
            return np.zeros(n)
        new_auth /= norm
        hubs = np.bincount(src, weights=w * new_auth[dst], minlength=n)
        hub_norm = np.linalg.norm(hubs)
        if hub_norm > 0.0:
            hubs /= hub_norm
        delta = float(np.max(np.abs(new_auth - auth)))
        auth = new_auth
        if delta < tolerance:
            break
    return auth


def pagerank(
    graph: TrustGraph,
    damping: float = 0.85,
    tolerance: float = 1e-10,
    max_iterations: int = 200,
    *,
    weighted: bool = True,
) -> np.ndarray:
    """Weighted PageRank over the non-negative edges.

    Transition probabilities are out-edge weights normalized per source; a
    node whose outgoing weights sum to zero is dangling and spreads its mass
    uniformly. The result sums to 1.
    """
    if not 0.0 < damping < 1.0:
        raise DomainError(f"damping must lie in (0, 1), got {damping}")
    n = graph.node_count
    src, dst, w = _nonnegative_edges(graph, weighted)

    strength = np.bincount(src, weights=w, minlength=n)
    share = np.divide(w, strength[src], out=np.zeros_like(w), where=strength[src] > 0)
    dangling = strength == 0.0

    rank = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for _ in range(max_iterations):
        flow = np.bincount(dst, weights=share * rank[src], minlength=n)
        spread = rank[dangling].sum() / n
        new_rank = damping * (flow + spread) + base
        delta = float(np.abs(new_rank - rank).sum())
        rank = new_rank
        if delta < tolerance:
            break
    return rank


BASELINES = {
    "aa": arithmetic_average,
    "hits": hits_authority,
    "pagerank": pagerank,
}


def baseline_scores(name: str, graph: TrustGraph) -> np.ndarray:
    """Run one of the named baselines with its default settings."""
    try:
        fn = BASELINES[name]
    except KeyError:
        raise DomainError(f"unknown baseline {name!r}; pick one of {tuple(BASELINES)}") from None
    return fn(graph)
