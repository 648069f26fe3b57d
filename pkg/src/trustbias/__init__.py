"""Bias and prestige scores for directed weighted trust networks.

The package couples a prestige update (trustworthiness-weighted average of
incoming trust scores) with a contractive bias map (how far a node's given
scores sit from consensus) and iterates the pair to its unique fixed point.
Several bias maps are provided, including an absolute-difference family that
resists the score-cancellation attack the signed-mean variant suffers from,
plus baseline rankers, evaluation metrics, and an experiment harness.
"""

from .baselines import BASELINES, arithmetic_average, baseline_scores, hits_authority, pagerank
from .bias_functions import (
    VARIANTS,
    BiasFunctionSpec,
    evaluate_bias,
    l1_avg_bias,
    l1_max_bias,
    l2_avg_bias,
    l2_avg_signed_bias,
    l2_max_bias,
    l2_max_signed_bias,
    mb_bias,
    mb_raw_bias,
    resolve_spec,
)
from .datasets import FIVE_NODE_PARTIAL_EDGES, cancellation_attack_graph, five_node_partial
from .errors import (
    DimensionError,
    DomainError,
    EdgeListParseError,
    EmptyGraphError,
    TrustBiasError,
    UndefinedAucError,
    VariantMismatchError,
)
from .estimators import BaselineRanker, BiasPrestigeRanker, as_trust_graph
from .experiments import (
    ExperimentReport,
    bias_comparison,
    default_algorithm_suite,
    inject_spam,
    lambda_sweep,
    prestige_comparison,
    robustness_experiment,
    scalability_experiment,
)
from .graph import (
    EdgeRecord,
    TrustGraph,
    build_graph,
    generate_synthetic,
    induced_subgraph,
    parse_edge_list,
    read_graph,
)
from .metrics import (
    RankReport,
    auc_top_fraction,
    kendall_tau_b,
    top_fraction_labels,
    variance_ground_truth,
)
from .solver import (
    DEFAULT_STOP,
    SolveResult,
    StoppingRule,
    required_iterations,
    solve,
    solve_mb_signed,
)

__version__ = "0.1.0"

__all__ = [
    "BASELINES",
    "BaselineRanker",
    "BiasFunctionSpec",
    "BiasPrestigeRanker",
    "DEFAULT_STOP",
    "DimensionError",
    "DomainError",
    "EdgeListParseError",
    "EdgeRecord",
    "EmptyGraphError",
    "ExperimentReport",
    "FIVE_NODE_PARTIAL_EDGES",
    "RankReport",
    "SolveResult",
    "StoppingRule",
    "TrustBiasError",
    "TrustGraph",
    "UndefinedAucError",
    "VARIANTS",
    "VariantMismatchError",
    "arithmetic_average",
    "as_trust_graph",
    "auc_top_fraction",
    "baseline_scores",
    "bias_comparison",
    "build_graph",
    "cancellation_attack_graph",
    "default_algorithm_suite",
    "evaluate_bias",
    "five_node_partial",
    "generate_synthetic",
    "hits_authority",
    "induced_subgraph",
    "inject_spam",
    "kendall_tau_b",
    "l1_avg_bias",
    "l1_max_bias",
    "l2_avg_bias",
    "l2_avg_signed_bias",
    "l2_max_bias",
    "l2_max_signed_bias",
    "lambda_sweep",
    "mb_bias",
    "mb_raw_bias",
    "pagerank",
    "parse_edge_list",
    "prestige_comparison",
    "read_graph",
    "required_iterations",
    "resolve_spec",
    "robustness_experiment",
    "scalability_experiment",
    "solve",
    "solve_mb_signed",
    "top_fraction_labels",
    "variance_ground_truth",
]
