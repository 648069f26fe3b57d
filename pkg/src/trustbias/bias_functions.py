"""Contractive maps from a prestige vector to a bias vector.

Every variant scores node ``j`` from the differences between the trust scores
``j`` hands out and the current prestige of the rated nodes. All maps are
contractions of the prestige vector under the infinity norm, which is what
makes the coupled iteration in :mod:`trustbias.solver` converge; the factor is
``decay`` for every variant except ``mb`` whose factor is fixed at 1/2.

Variants
--------
``mb``             signed mean difference, clipped at zero (vulnerable to
                   cancellation between positive and negative differences)
``l1-avg``         decay * mean |difference|
``l1-max``         decay * max |difference|
``l2-avg``         decay/2 * mean difference^2          (unsigned graphs)
``l2-max``         decay/2 * max difference^2           (unsigned graphs)
``l2-avg-signed``  decay/4 * mean difference^2          (signed graphs)
``l2-max-signed``  decay/4 * max difference^2           (signed graphs)

A node with no outgoing edges expresses no opinions and always gets bias 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError, DomainError, VariantMismatchError
from .graph import TrustGraph

VARIANTS = ("mb", "l1-avg", "l1-max", "l2-avg", "l2-max", "l2-avg-signed", "l2-max-signed")

MB_CONTRACTION = 0.5

_SIGNED_SUBSTITUTES = {"l2-avg": "l2-avg-signed", "l2-max": "l2-max-signed"}
_UNSIGNED_ONLY = ("l2-avg", "l2-max")
_SIGNED_ONLY = ("l2-avg-signed", "l2-max-signed")


@dataclass(frozen=True)
class BiasFunctionSpec:
    """Which bias map to use and its decay constant.

    ``decay`` must lie in [0, 1) for every variant except ``mb``, which ignores
    it; on signed graphs the L1 variants additionally require ``decay <= 1/2``
    so the bias stays within [0, 1].
    """

    variant: str
    decay: float = 0.5

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}; pick one of {VARIANTS}")
        if self.variant != "mb" and not 0.0 <= self.decay < 1.0:
            raise DomainError(f"decay must lie in [0, 1), got {self.decay}")

    @property
    def effective_contraction(self) -> float:
        return MB_CONTRACTION if self.variant == "mb" else self.decay

    def validate_for_graph(self, graph: TrustGraph) -> None:
        if graph.signed and self.variant in _UNSIGNED_ONLY:
            raise VariantMismatchError(
                f"{self.variant} needs an unsigned graph; use {_SIGNED_SUBSTITUTES[self.variant]}"
            )
        if not graph.signed and self.variant in _SIGNED_ONLY:
            raise VariantMismatchError(f"{self.variant} needs a signed graph")
        if graph.signed and self.variant in ("l1-avg", "l1-max") and self.decay > 0.5:
            raise DomainError(
                f"{self.variant} on a signed graph needs decay <= 0.5, got {self.decay}"
            )


def resolve_spec(spec: BiasFunctionSpec, graph: TrustGraph) -> BiasFunctionSpec:
    """Substitute the signed forms of the L2 variants when the graph is signed."""
    if graph.signed and spec.variant in _SIGNED_SUBSTITUTES:
        spec = replace(spec, variant=_SIGNED_SUBSTITUTES[spec.variant])
    spec.validate_for_graph(graph)
    return spec


def _check_prestige(r, graph: TrustGraph) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (graph.node_count,):
        raise DimensionError(
            f"prestige vector has length {r.shape}, graph has {graph.node_count} nodes"
        )
    return r


def _out_differences(r: np.ndarray, graph: TrustGraph, lo: int, hi: int) -> np.ndarray:
    a, b = graph.out_ptr[lo], graph.out_ptr[hi]
    return graph.out_weights[a:b] - r[graph.out_dst[a:b]]


def _mean_over_out(values: np.ndarray, graph: TrustGraph, lo: int, hi: int) -> np.ndarray:
    a = graph.out_ptr[lo]
    idx = graph.out_src[a : a + values.size] - lo
    sums = np.bincount(idx, weights=values, minlength=hi - lo)
    deg = graph.out_degree[lo:hi]
    return np.divide(sums, deg, out=np.zeros(hi - lo), where=deg > 0)


def _max_over_out(values: np.ndarray, graph: TrustGraph, lo: int, hi: int) -> np.ndarray:
    # reduceat over the starts of non-empty segments only: consecutive starts
    # are exactly one segment apart because empty segments repeat the offset.
    out = np.zeros(hi - lo)
    if values.size == 0:
        return out
    ptr = graph.out_ptr[lo : hi + 1] - graph.out_ptr[lo]
    nonempty = ptr[1:] > ptr[:-1]
    if nonempty.any():
        out[nonempty] = np.maximum.reduceat(values, ptr[:-1][nonempty])
    return out


def _evaluate_slice(
    variant: str, r: np.ndarray, graph: TrustGraph, decay: float, lo: int, hi: int
) -> np.ndarray:
    d = _out_differences(r, graph, lo, hi)
    if variant == "mb":
        return np.maximum(0.0, 0.5 * _mean_over_out(d, graph, lo, hi))
    if variant == "mb-raw":
        return 0.5 * _mean_over_out(d, graph, lo, hi)
    if variant == "l1-avg":
        return decay * _mean_over_out(np.abs(d), graph, lo, hi)
    if variant == "l1-max":
        return decay * _max_over_out(np.abs(d), graph, lo, hi)
    if variant == "l2-avg":
        return 0.5 * decay * _mean_over_out(d * d, graph, lo, hi)
    if variant == "l2-max":
        return 0.5 * decay * _max_over_out(d * d, graph, lo, hi)
    if variant == "l2-avg-signed":
        return 0.25 * decay * _mean_over_out(d * d, graph, lo, hi)
    if variant == "l2-max-signed":
        return 0.25 * decay * _max_over_out(d * d, graph, lo, hi)
    raise DomainError(f"unknown variant {variant!r}")


def evaluate_bias(spec: BiasFunctionSpec, r, graph: TrustGraph) -> np.ndarray:
    """Apply the spec's bias map to a prestige vector."""
    spec.validate_for_graph(graph)
    r = _check_prestige(r, graph)
    return _evaluate_slice(spec.variant, r, graph, spec.decay, 0, graph.node_count)


def mb_bias(r, graph: TrustGraph) -> np.ndarray:
    """Clipped signed-mean bias: max{0, mean(w - r)/2} over each node's out-edges."""
    r = _check_prestige(r, graph)
    return _evaluate_slice("mb", r, graph, 0.0, 0, graph.node_count)


def mb_raw_bias(r, graph: TrustGraph) -> np.ndarray:
    """Unclipped signed-mean bias; rank nodes by its absolute value."""
    r = _check_prestige(r, graph)
    return _evaluate_slice("mb-raw", r, graph, 0.0, 0, graph.node_count)


def l1_avg_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay * mean absolute difference over each node's out-edges."""
    r = _check_prestige(r, graph)
    return _evaluate_slice("l1-avg", r, graph, decay, 0, graph.node_count)


def l1_max_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay * max absolute difference over each node's out-edges."""
    r = _check_prestige(r, graph)
    return _evaluate_slice("l1-max", r, graph, decay, 0, graph.node_count)


def l2_avg_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay/2 * mean squared difference; unsigned graphs only."""
    if graph.signed:
        raise VariantMismatchError("l2-avg needs an unsigned graph; use l2-avg-signed")
    r = _check_prestige(r, graph)
    return _evaluate_slice("l2-avg", r, graph, decay, 0, graph.node_count)


def l2_max_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay/2 * max squared difference; unsigned graphs only."""
    if graph.signed:
        raise VariantMismatchError("l2-max needs an unsigned graph; use l2-max-signed")
    r = _check_prestige(r, graph)
    return _evaluate_slice("l2-max", r, graph, decay, 0, graph.node_count)


def l2_avg_signed_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay/4 * mean squared difference; signed graphs only."""
    if not graph.signed:
        raise VariantMismatchError("l2-avg-signed needs a signed graph")
    r = _check_prestige(r, graph)
    return _evaluate_slice("l2-avg-signed", r, graph, decay, 0, graph.node_count)


def l2_max_signed_bias(r, graph: TrustGraph, decay: float) -> np.ndarray:
    """decay/4 * max squared difference; signed graphs only."""
    if not graph.signed:
        raise VariantMismatchError("l2-max-signed needs a signed graph")
    r = _check_prestige(r, graph)
    return _evaluate_slice("l2-max-signed", r, graph, decay, 0, graph.node_count)
