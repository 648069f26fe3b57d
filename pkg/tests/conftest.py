import numpy as np
import pytest

from trustbias import BiasFunctionSpec, TrustGraph, build_graph, generate_synthetic

FRAMEWORK_VARIANTS = ("mb", "l1-avg", "l1-max", "l2-avg", "l2-max")
SIGNED_VARIANTS = ("l1-avg", "l1-max", "l2-avg-signed", "l2-max-signed")


@pytest.fixture
def two_node_graph() -> TrustGraph:
    return build_graph([(0, 1, 0.8), (1, 0, 0.4)])


@pytest.fixture
def small_unsigned() -> TrustGraph:
    return generate_synthetic(40, 4, "uniform", seed=7)


@pytest.fixture
def small_signed() -> TrustGraph:
    return generate_synthetic(40, 4, "signed", seed=7)


def make_signed_twin(graph: TrustGraph) -> TrustGraph:
    """Same edges, but flagged signed (weights must already be non-negative)."""
    return TrustGraph(
        graph.node_count,
        graph.out_src,
        graph.out_dst,
        graph.out_weights,
        node_labels=graph.node_labels,
        signed=True,
    )


def specs_for(graph: TrustGraph, decay: float = 0.5) -> list[BiasFunctionSpec]:
    names = SIGNED_VARIANTS if graph.signed else FRAMEWORK_VARIANTS
    return [BiasFunctionSpec(name, decay) for name in names]


def single_rater_graph(weights, prestige_targets=None) -> TrustGraph:
    """Node 0 rates nodes 1..k with the given weights."""
    k = len(weights)
    src = np.zeros(k, dtype=np.int64)
    dst = np.arange(1, k + 1, dtype=np.int64)
    return TrustGraph(k + 1, src, dst, np.asarray(weights, dtype=float),
                      signed=bool(np.min(weights) < 0))
