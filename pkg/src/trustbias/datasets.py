"""Built-in example graphs used by the tests and the documentation."""

from __future__ import annotations

import numpy as np

from .graph import TrustGraph, build_graph

# Known edges of a small five-node network whose incoming averages for nodes
# 1, 2, 3 are 0.567, 0.000 and 0.433; the edges into nodes 4 and 5 are not
# part of the fixture, so those two nodes have no incoming edges here.
FIVE_NODE_PARTIAL_EDGES = (
    (5, 1, 0.1),
    (2, 1, 0.8),
    (3, 1, 0.8),
    (5, 3, 0.9),
    (2, 3, 0.2),
    (4, 3, 0.2),
    (3, 2, 0.0),
)


def five_node_partial() -> TrustGraph:
    """The partial five-node example network."""
    return build_graph(FIVE_NODE_PARTIAL_EDGES)


def cancellation_attack_graph(
    raters: int = 8,
    targets_per_side: int = 4,
    drift: float = 0.05,
) -> tuple[TrustGraph, int, list[int]]:
    """Graph where one adversary's deviations cancel under signed averaging.

    ``raters`` honest nodes score every target close to consensus: "good"
    targets around 0.9 and "bad" targets around 0.1, each rater consistently
    shifted by +/-``drift``. One adversary inverts consensus, rating good
    targets 0.1 and bad targets 0.9 in equal numbers, so its positive and
    negative differences sum to roughly zero while every absolute-difference
    measure flags it immediately.

    Returns ``(graph, adversary_id, honest_rater_ids)`` with dense ids; the
    honest raters come first, then the adversary, then the targets.
    """
    if raters < 2 or targets_per_side < 1:
        raise ValueError("need at least 2 raters and 1 target per side")
    if not 0.0 < drift < 0.1:
        raise ValueError("drift must stay small so honest scores remain in range")

    adversary = raters
    good = [raters + 1 + t for t in range(targets_per_side)]
    bad = [raters + 1 + targets_per_side + t for t in range(targets_per_side)]

    edges = []
    for k in range(raters):
        offset = drift if k % 2 == 0 else -drift
        for t in good:
            edges.append((k, t, 0.9 + offset))
        for t in bad:
            edges.append((k, t, 0.1 + offset))
    for t in good:
        edges.append((adversary, t, 0.1))
    for t in bad:
        edges.append((adversary, t, 0.9))

    src, dst, w = zip(*edges)
    n = raters + 1 + 2 * targets_per_side
    graph = TrustGraph(n, np.array(src), np.array(dst), np.array(w))
    return graph, adversary, list(range(raters))
