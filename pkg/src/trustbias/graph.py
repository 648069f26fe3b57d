"""Directed weighted trust graphs: ingestion, normalization, sampling, synthesis.

Nodes inside a :class:`TrustGraph` are dense integers ``0..n-1``; the ids found
in an edge-list file survive in ``node_labels``. Weights live in ``[0, 1]`` for
unsigned graphs and ``[-1, 1]`` for signed ones. Adjacency is stored CSR-style
in both directions, sorted by neighbor id, so every per-node reduction runs in
a fixed order regardless of how the work is split across threads.
"""

from __future__ import annotations

import os
from typing import IO, Iterable, NamedTuple

import numpy as np

from .errors import DimensionError, DomainError, EdgeListParseError, EmptyGraphError

NORMALIZATIONS = ("none", "minmax", "absmax")
WEIGHT_MODELS = ("uniform", "four-level", "signed")

FOUR_LEVEL_WEIGHTS = (0.4, 0.6, 0.8, 1.0)


class EdgeRecord(NamedTuple):
    """One raw edge as read from an edge list, weight not yet normalized."""

    source: int
    target: int
    weight: float


class TrustGraph:
    """Immutable directed weighted graph with dual (in/out) adjacency.

    Construct through :func:`build_graph`, :func:`generate_synthetic` or
    :meth:`from_edges`; the constructor expects already-dense node ids and
    rejects self-loops, duplicate ``(source, target)`` pairs, and weights
    outside the signedness range.
    """

    def __init__(
        self,
        node_count: int,
        sources,
        targets,
        weights,
        *,
        node_labels=None,
        signed: bool | None = None,
    ):
        n = int(node_count)
        if n <= 0:
            raise EmptyGraphError("a trust graph needs at least one node")
        src = np.ascontiguousarray(sources, dtype=np.int64)
        dst = np.ascontiguousarray(targets, dtype=np.int64)
        w = np.ascontiguousarray(weights, dtype=np.float64)
        if not (src.shape == dst.shape == w.shape and src.ndim == 1):
            raise DimensionError("sources, targets and weights must be equal-length 1-d arrays")
        if src.size:
            if src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n:
                raise DomainError("edge endpoint outside 0..n-1")
            if np.any(src == dst):
                raise DomainError("self-loops are not allowed")
            if not np.all(np.isfinite(w)):
                raise DomainError("edge weights must be finite")

        has_negative = bool(src.size) and bool(w.min() < 0.0)
        if signed is None:
            signed = has_negative
        elif not signed and has_negative:
            raise DomainError("graph declared unsigned but has negative weights")
        low = -1.0 if signed else 0.0
        if src.size and (w.min() < low or w.max() > 1.0):
            raise DomainError(f"weights must lie in [{low:g}, 1]")

        order = np.lexsort((dst, src))
        src, dst, w = src[order], dst[order], w[order]
        if src.size > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if np.any(dup):
                raise DomainError("duplicate (source, target) edge")

        self.node_count = n
        self.edge_count = int(src.size)
        self.signed = bool(signed)

        self.out_src, self.out_dst, self.out_weights = src, dst, w
        self.out_degree = np.bincount(src, minlength=n)
        self.out_ptr = np.concatenate(([0], np.cumsum(self.out_degree)))

        in_order = np.lexsort((src, dst))
        self.in_src = src[in_order]
        self.in_dst = dst[in_order]
        self.in_weights = w[in_order]
        self.in_degree = np.bincount(dst, minlength=n)
        self.in_ptr = np.concatenate(([0], np.cumsum(self.in_degree)))

        if node_labels is None:
            node_labels = np.arange(n, dtype=np.int64)
        labels = np.ascontiguousarray(node_labels, dtype=np.int64)
        if labels.shape != (n,):
            raise DimensionError("node_labels must have one entry per node")
        if np.unique(labels).size != n:
            raise DomainError("node labels must be unique")
        self.node_labels = labels

        for arr in (
            self.out_src, self.out_dst, self.out_weights, self.out_degree, self.out_ptr,
            self.in_src, self.in_dst, self.in_weights, self.in_degree, self.in_ptr,
            self.node_labels,
        ):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], *, signed: bool | None = None) -> "TrustGraph":
        """Build from (source, target, weight) triples with arbitrary integer ids."""
        records = [EdgeRecord(int(e[0]), int(e[1]), float(e[2])) for e in edges]
        return build_graph(records, normalization="none", signed=signed)

    def out_neighbors(self, node: int):
        """Targets and weights of the node's outgoing edges, sorted by target id."""
        a, b = self.out_ptr[node], self.out_ptr[node + 1]
        return self.out_dst[a:b], self.out_weights[a:b]

    def in_neighbors(self, node: int):
        """Sources and weights of the node's incoming edges, sorted by source id."""
        a, b = self.in_ptr[node], self.in_ptr[node + 1]
        return self.in_src[a:b], self.in_weights[a:b]

    def edge_list(self) -> list[EdgeRecord]:
        """All edges as dense-id records, sorted by (source, target)."""
        return [
            EdgeRecord(int(s), int(t), float(w))
            for s, t, w in zip(self.out_src, self.out_dst, self.out_weights)
        ]

    def to_edge_list_text(self) -> str:
        """Serialize with original node labels; ``repr`` keeps weights exact."""
        lines = [
            f"{self.node_labels[s]} {self.node_labels[t]} {float(w)!r}"
            for s, t, w in zip(self.out_src, self.out_dst, self.out_weights)
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def write_edge_list(self, target: str | os.PathLike | IO[str]) -> None:
        text = self.to_edge_list_text()
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)

    def _label_edge_key(self):
        ls = self.node_labels[self.out_src]
        lt = self.node_labels[self.out_dst]
        order = np.lexsort((lt, ls))
        return ls[order], lt[order], self.out_weights[order]

    def __eq__(self, other):
        if not isinstance(other, TrustGraph):
            return NotImplemented
        if self.signed != other.signed or self.node_count != other.node_count:
            return False
        if not np.array_equal(np.sort(self.node_labels), np.sort(other.node_labels)):
            return False
        return all(np.array_equal(a, b) for a, b in zip(self._label_edge_key(), other._label_edge_key()))

    __hash__ = None  # mutable-by-identity semantics are not wanted; compare by content only

    def __repr__(self):
        kind = "signed" if self.signed else "unsigned"
        return f"TrustGraph(n={self.node_count}, m={self.edge_count}, {kind})"


def parse_edge_list(
    stream: str | Iterable[str],
    *,
    delimiter: str | None = None,
    comment_prefix: str = "#",
) -> list[EdgeRecord]:
    """Parse SNAP-style edge-list text into raw records.

    Each non-comment line holds ``source target [weight]`` separated by
    whitespace (or ``delimiter``); the weight defaults to 1.0. Records are
    returned in file order with ids untouched.
    """
    lines = stream.splitlines() if isinstance(stream, str) else stream
    records: list[EdgeRecord] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefix):
            continue
        parts = line.split(delimiter)
        if len(parts) not in (2, 3):
            raise EdgeListParseError(line_no, f"expected 2 or 3 fields, got {len(parts)}")
        try:
            source = int(parts[0])
            target = int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"node ids must be integers: {line!r}") from None
        if source < 0 or target < 0:
            raise EdgeListParseError(line_no, "node ids must be non-negative")
        if len(parts) == 3:
            try:
                weight = float(parts[2])
            except ValueError:
                raise EdgeListParseError(line_no, f"bad weight field: {parts[2]!r}") from None
            if not np.isfinite(weight):
                raise EdgeListParseError(line_no, f"non-finite weight: {parts[2]!r}")
        else:
            weight = 1.0
        records.append(EdgeRecord(source, target, weight))
    return records


def build_graph(
    records,
    normalization: str = "none",
    *,
    signed: bool | None = None,
) -> TrustGraph:
    """Clean raw records and assemble a :class:`TrustGraph`.

    Self-loops are dropped, duplicate ``(source, target)`` pairs keep the last
    occurrence, and node ids are densely re-indexed in order of first
    appearance. ``normalization`` is applied to the surviving weights:

    * ``"none"``    - weights must already lie in the valid range;
    * ``"minmax"``  - affine map from [observed min, observed max] onto [0, 1]
      (all weights map to 1.0 when min equals max);
    * ``"absmax"``  - divide by max absolute weight, preserving sign.

    The graph is flagged signed iff any final weight is negative, unless
    ``signed=True`` forces the signed domain.
    """
    if normalization not in NORMALIZATIONS:
        raise DomainError(f"unknown normalization {normalization!r}; pick one of {NORMALIZATIONS}")
    records = list(records)
    if not records:
        raise EmptyGraphError("no edge records supplied")

    src = np.array([int(r[0]) for r in records], dtype=np.int64)
    dst = np.array([int(r[1]) for r in records], dtype=np.int64)
    w = np.array([float(r[2]) for r in records], dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise DomainError("edge weights must be finite")
    if src.size and (src.min() < 0 or dst.min() < 0):
        raise DomainError("node ids must be non-negative")

    keep = src != dst
    src, dst, w = src[keep], dst[keep], w[keep]
    if src.size == 0:
        raise EmptyGraphError("no edges left after dropping self-loops")

    # Dense ids follow first appearance, scanning each record's source then target.
    stream = np.empty(2 * src.size, dtype=np.int64)
    stream[0::2] = src
    stream[1::2] = dst
    _, first_idx = np.unique(stream, return_index=True)
    labels = stream[np.sort(first_idx)]
    by_value = np.argsort(labels)
    sorted_labels = labels[by_value]
    src = by_value[np.searchsorted(sorted_labels, src)]
    dst = by_value[np.searchsorted(sorted_labels, dst)]

    # Keep-last for duplicate (source, target) pairs.
    pos = np.arange(src.size)
    order = np.lexsort((pos, dst, src))
    s2, d2 = src[order], dst[order]
    last = np.ones(src.size, dtype=bool)
    if src.size > 1:
        last[:-1] = (s2[1:] != s2[:-1]) | (d2[1:] != d2[:-1])
    keep_idx = order[last]
    src, dst, w = src[keep_idx], dst[keep_idx], w[keep_idx]

    if normalization == "minmax":
        lo, hi = w.min(), w.max()
        w = np.ones_like(w) if lo == hi else (w - lo) / (hi - lo)
    elif normalization == "absmax":
        scale = np.abs(w).max()
        if scale > 0:
            w = w / scale

    return TrustGraph(labels.size, src, dst, w, node_labels=labels, signed=signed)


def read_graph(path: str | os.PathLike, normalization: str = "none") -> TrustGraph:
    """Parse an edge-list file and build a graph from it."""
    with open(path, "r", encoding="utf-8") as fh:
        records = parse_edge_list(fh)
    return build_graph(records, normalization=normalization)


def induced_subgraph(graph: TrustGraph, nodes) -> TrustGraph:
    """Subgraph on ``nodes`` (dense ids), keeping edges with both endpoints inside.

    Selected nodes are re-indexed densely in ascending old-id order; the
    signedness flag is inherited even if no negative edge survives.
    """
    keep = np.unique(np.asarray(list(nodes), dtype=np.int64))
    if keep.size == 0:
        raise EmptyGraphError("empty node set")
    if keep.min() < 0 or keep.max() >= graph.node_count:
        raise DomainError("node set contains ids outside the graph")

    member = np.zeros(graph.node_count, dtype=bool)
    member[keep] = True
    mask = member[graph.out_src] & member[graph.out_dst]
    src = np.searchsorted(keep, graph.out_src[mask])
    dst = np.searchsorted(keep, graph.out_dst[mask])
    return TrustGraph(
        keep.size,
        src,
        dst,
        graph.out_weights[mask],
        node_labels=graph.node_labels[keep],
        signed=graph.signed,
    )


def generate_synthetic(
    n: int,
    avg_out_degree: float,
    weight_model: str = "uniform",
    seed: int = 0,
    *,
    neg_fraction: float = 0.2,
) -> TrustGraph:
    """Random graph: every node rates ``round(avg_out_degree)`` distinct others.

    Weight models: ``"uniform"`` draws U[0,1]; ``"four-level"`` picks uniformly
    from {0.4, 0.6, 0.8, 1.0}; ``"signed"`` draws magnitude U(0,1] and flips the
    sign with probability ``neg_fraction`` (the graph is flagged signed even if
    no negative weight was drawn). Output is deterministic per seed.
    """
    if weight_model not in WEIGHT_MODELS:
        raise DomainError(f"unknown weight model {weight_model!r}; pick one of {WEIGHT_MODELS}")
    if n < 2:
        raise DomainError("need at least 2 nodes")
    if avg_out_degree < 0:
        raise DomainError("avg_out_degree must be non-negative")
    deg = int(round(avg_out_degree))
    if avg_out_degree >= n or deg > n - 1:
        raise DomainError(f"out-degree {avg_out_degree} too large for {n} nodes")
    if not 0.0 <= neg_fraction <= 1.0:
        raise DomainError("neg_fraction must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    signed = weight_model == "signed"
    if deg == 0:
        empty = np.empty(0, dtype=np.int64)
        return TrustGraph(n, empty, empty, np.empty(0), signed=signed)

    rows = np.arange(n)[:, None]
    draw = rng.integers(0, n - 1, size=(n, deg))
    draw += draw >= rows  # shift past the diagonal so targets never equal the source
    while True:
        srt = np.sort(draw, axis=1)
        bad = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
        if not bad.any():
            break
        redraw = rng.integers(0, n - 1, size=(int(bad.sum()), deg))
        redraw += redraw >= rows[bad]
        draw[bad] = redraw

    m = n * deg
    if weight_model == "uniform":
        w = rng.random(m)
    elif weight_model == "four-level":
        w = rng.choice(np.asarray(FOUR_LEVEL_WEIGHTS), size=m)
    else:
        magnitude = 1.0 - rng.random(m)  # U(0, 1]
        negative = rng.random(m) < neg_fraction
        w = np.where(negative, -magnitude, magnitude)

    src = np.repeat(np.arange(n, dtype=np.int64), deg)
    return TrustGraph(n, src, draw.ravel(), w, signed=signed)
