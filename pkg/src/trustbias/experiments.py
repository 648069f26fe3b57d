"""Evaluation harness: ranking comparisons, spam robustness, scaling, decay sweeps.

Every experiment returns an :class:`ExperimentReport` that serializes to JSON
and flat CSV. Reports are replayable: identical inputs and seeds give
identical rows except for the wall-clock fields, whose keys all end in
``_ms``.
"""

from __future__ import annotations

import csv
import io
import json
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .baselines import arithmetic_average, baseline_scores
from .bias_functions import BiasFunctionSpec, resolve_spec
from .errors import DomainError
from .graph import TrustGraph, induced_subgraph
from .metrics import RankReport, auc_top_fraction, kendall_tau_b, variance_ground_truth
from .solver import DEFAULT_STOP, SolveResult, StoppingRule, solve

DEFAULT_BASELINES = ("aa", "hits", "pagerank")


@dataclass
class ExperimentReport:
    """Structured result of one experiment run."""

    kind: str
    parameters: dict
    graph_summary: dict
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "parameters": self.parameters,
            "graph": self.graph_summary,
            "rows": self.rows,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([row.get(col, "") for col in self.columns])
        return buf.getvalue()

    def write(self, json_path, csv_path) -> None:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())

    def replay_payload(self) -> dict:
        """The report minus wall-clock fields, for determinism comparisons."""
        rows = [{k: v for k, v in row.items() if not k.endswith("_ms")} for row in self.rows]
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "graph": self.graph_summary,
            "rows": rows,
        }


def _graph_summary(graph: TrustGraph) -> dict:
    return {"nodes": graph.node_count, "edges": graph.edge_count, "signed": graph.signed}


def default_algorithm_suite(graph: TrustGraph, decay: float = 0.5) -> list[BiasFunctionSpec]:
    """The standard five algorithms, resolved for the graph's signedness."""
    names = ("mb", "l1-avg", "l1-max", "l2-avg", "l2-max")
    return [resolve_spec(BiasFunctionSpec(name, decay), graph) for name in names]


def _timed_solve(graph, spec, stop, threads) -> tuple[SolveResult, float]:
    start = time.perf_counter()
    result = solve(graph, spec, stop, threads=threads)
    return result, (time.perf_counter() - start) * 1000.0


def inject_spam(
    graph: TrustGraph, ratio: float, seed: int
) -> tuple[TrustGraph, set[int]]:
    """Rewrite the outgoing scores of ``round(ratio*n)`` random raters.

    Spammers are drawn among nodes with at least one outgoing edge. Each of
    their edges is redrawn against consensus: targets whose incoming average
    sits below the global median get a high score (U[0.8, 1.0] unsigned,
    U[0.6, 1.0] signed) and the rest get a low one (U[0.0, 0.2] unsigned,
    U[-1.0, -0.6] signed). Other edges are untouched. ``ratio`` 0 returns the
    graph unchanged; a positive ratio that rounds to zero spammers warns.
    """
    if not 0.0 <= ratio < 1.0:
        raise DomainError(f"spam ratio must lie in [0, 1), got {ratio}")
    count = int(round(ratio * graph.node_count))
    if count == 0:
        if ratio > 0.0:
            warnings.warn(f"ratio {ratio} selects no spammers on {graph.node_count} nodes")
        return graph, set()

    rng = np.random.default_rng(seed)
    eligible = np.flatnonzero(graph.out_degree > 0)
    count = min(count, eligible.size)
    spammers = np.sort(rng.choice(eligible, size=count, replace=False))

    aa = arithmetic_average(graph)
    median = float(np.median(aa))

    new_w = graph.out_weights.copy()
    for s in spammers:
        a, b = graph.out_ptr[s], graph.out_ptr[s + 1]
        low_target = aa[graph.out_dst[a:b]] < median
        u = rng.random(b - a)
        if graph.signed:
            redrawn = np.where(low_target, 0.6 + 0.4 * u, -1.0 + 0.4 * u)
        else:
            redrawn = np.where(low_target, 0.8 + 0.2 * u, 0.2 * u)
        new_w[a:b] = redrawn

    spammed = TrustGraph(
        graph.node_count,
        graph.out_src,
        graph.out_dst,
        new_w,
        node_labels=graph.node_labels,
        signed=graph.signed,
    )
    return spammed, {int(s) for s in spammers}


def bias_comparison(
    graph: TrustGraph,
    algorithms: list[BiasFunctionSpec],
    fraction: float = 0.05,
    *,
    stop: StoppingRule = DEFAULT_STOP,
    threads: int = 1,
) -> ExperimentReport:
    """Score each bias ranking against the variance ground truth (AUC and tau)."""
    if not algorithms:
        raise DomainError("need at least one algorithm")
    truth = variance_ground_truth(graph)
    report = ExperimentReport(
        kind="bias-comparison",
        parameters={"fraction": fraction, "stop": _stop_params(stop)},
        graph_summary=_graph_summary(graph),
        columns=["algorithm", "decay", "bias_auc", "bias_tau", "solve_ms"],
    )
    for spec in algorithms:
        result, elapsed = _timed_solve(graph, spec, stop, threads)
        scores = result.bias_ranking_scores()
        auc = RankReport(
            "auc-top-fraction",
            auc_top_fraction(scores, truth, fraction),
            {"fraction": fraction},
            graph.node_count,
        )
        tau = RankReport(
            "kendall-tau-b", kendall_tau_b(scores, truth), {}, graph.node_count
        )
        report.rows.append(
            {
                "algorithm": spec.variant,
                "decay": spec.decay,
                "bias_auc": auc.value,
                "bias_tau": tau.value,
                "solve_ms": elapsed,
            }
        )
    return report


def prestige_comparison(
    graph: TrustGraph,
    algorithms: list[BiasFunctionSpec],
    baselines: tuple[str, ...] = DEFAULT_BASELINES,
    *,
    stop: StoppingRule = DEFAULT_STOP,
    threads: int = 1,
) -> ExperimentReport:
    """Rank correlation of each algorithm's prestige against baseline rankers."""
    if not algorithms:
        raise DomainError("need at least one algorithm")
    reference = {name: baseline_scores(name, graph) for name in baselines}
    columns = ["algorithm", "decay"] + [f"tau_{name}" for name in baselines] + ["solve_ms"]
    report = ExperimentReport(
        kind="prestige-comparison",
        parameters={"baselines": list(baselines), "stop": _stop_params(stop)},
        graph_summary=_graph_summary(graph),
        columns=columns,
    )
    for spec in algorithms:
        result, elapsed = _timed_solve(graph, spec, stop, threads)
        row = {"algorithm": spec.variant, "decay": spec.decay, "solve_ms": elapsed}
        for name in baselines:
            row[f"tau_{name}"] = kendall_tau_b(result.prestige, reference[name])
        report.rows.append(row)
    return report


def robustness_experiment(
    graph: TrustGraph,
    ratios: list[float],
    seeds: list[int],
    algorithms: list[BiasFunctionSpec],
    *,
    stop: StoppingRule = DEFAULT_STOP,
    threads: int = 1,
) -> ExperimentReport:
    """How stable each algorithm's rankings are under spam injection.

    For every (ratio, seed) pair the graph is spammed and re-solved; the row
    for (ratio, algorithm) reports the mean Kendall tau between the original
    and spammed rankings, separately for bias and prestige. Higher is more
    robust.
    """
    if not algorithms:
        raise DomainError("need at least one algorithm")
    if not ratios or not seeds:
        raise DomainError("need at least one ratio and one seed")
    report = ExperimentReport(
        kind="robustness",
        parameters={
            "ratios": list(map(float, ratios)),
            "seeds": list(map(int, seeds)),
            "stop": _stop_params(stop),
        },
        graph_summary=_graph_summary(graph),
        columns=["ratio", "algorithm", "decay", "bias_tau", "prestige_tau"],
    )
    baseline_runs = {
        spec: solve(graph, spec, stop, threads=threads) for spec in algorithms
    }
    for ratio in ratios:
        tau_sums = {spec: [0.0, 0.0] for spec in algorithms}
        for seed in seeds:
            spammed, _ = inject_spam(graph, ratio, seed)
            for spec in algorithms:
                original = baseline_runs[spec]
                perturbed = solve(spammed, spec, stop, threads=threads)
                tau_sums[spec][0] += kendall_tau_b(
                    original.bias_ranking_scores(), perturbed.bias_ranking_scores()
                )
                tau_sums[spec][1] += kendall_tau_b(original.prestige, perturbed.prestige)
        for spec in algorithms:
            bias_tau, prestige_tau = (s / len(seeds) for s in tau_sums[spec])
            report.rows.append(
                {
                    "ratio": float(ratio),
                    "algorithm": spec.variant,
                    "decay": spec.decay,
                    "bias_tau": bias_tau,
                    "prestige_tau": prestige_tau,
                }
            )
    return report


def scalability_experiment(
    graph: TrustGraph,
    fractions: list[float],
    seed: int,
    algorithms: list[BiasFunctionSpec] | None = None,
    *,
    stop: StoppingRule = StoppingRule.fixed(15),
    threads: int = 1,
    repetitions: int = 3,
) -> ExperimentReport:
    """Solve time on nested random subgraphs of growing node fractions.

    The node subsets are prefixes of one seeded permutation, so each subset
    contains the previous one. Per cell the minimum wall-clock over
    ``repetitions`` runs is reported.
    """
    fracs = [float(f) for f in fractions]
    if not fracs or any(not 0.0 < f <= 1.0 for f in fracs):
        raise DomainError("fractions must lie in (0, 1]")
    if any(b <= a for a, b in zip(fracs, fracs[1:])):
        raise DomainError("fractions must be strictly increasing")
    if algorithms is None:
        algorithms = default_algorithm_suite(graph)

    permutation = np.random.default_rng(seed).permutation(graph.node_count)
    report = ExperimentReport(
        kind="scalability",
        parameters={"fractions": fracs, "seed": int(seed), "stop": _stop_params(stop)},
        graph_summary=_graph_summary(graph),
        columns=["fraction", "nodes", "edges", "algorithm", "decay", "solve_ms"],
    )
    for frac in fracs:
        count = max(1, int(round(frac * graph.node_count)))
        subgraph = induced_subgraph(graph, permutation[:count])
        for spec in algorithms:
            best = min(
                _timed_solve(subgraph, spec, stop, threads)[1] for _ in range(repetitions)
            )
            report.rows.append(
                {
                    "fraction": frac,
                    "nodes": subgraph.node_count,
                    "edges": subgraph.edge_count,
                    "algorithm": spec.variant,
                    "decay": spec.decay,
                    "solve_ms": best,
                }
            )
    return report


def lambda_sweep(
    graph: TrustGraph,
    decays: list[float],
    algorithm_names: list[str],
    baselines: tuple[str, ...] = DEFAULT_BASELINES,
    fraction: float = 0.05,
    *,
    stop: StoppingRule = DEFAULT_STOP,
    threads: int = 1,
) -> ExperimentReport:
    """Bias and prestige correlations of each variant across decay constants."""
    if not decays or not algorithm_names:
        raise DomainError("need at least one decay value and one algorithm")
    specs: list[BiasFunctionSpec] = []
    for decay in decays:
        for name in algorithm_names:
            try:
                specs.append(resolve_spec(BiasFunctionSpec(name, float(decay)), graph))
            except DomainError as exc:
                raise DomainError(f"decay {decay} invalid for {name}: {exc}") from None

    truth = variance_ground_truth(graph)
    reference = {name: baseline_scores(name, graph) for name in baselines}
    columns = (
        ["decay", "algorithm", "bias_tau"] + [f"tau_{name}" for name in baselines] + ["solve_ms"]
    )
    report = ExperimentReport(
        kind="lambda-sweep",
        parameters={
            "decays": [float(d) for d in decays],
            "baselines": list(baselines),
            "fraction": fraction,
            "stop": _stop_params(stop),
        },
        graph_summary=_graph_summary(graph),
        columns=columns,
    )
    for spec in specs:
        result, elapsed = _timed_solve(graph, spec, stop, threads)
        row = {
            "decay": spec.decay,
            "algorithm": spec.variant,
            "bias_tau": kendall_tau_b(result.bias_ranking_scores(), truth),
            "solve_ms": elapsed,
        }
        for name in baselines:
            row[f"tau_{name}"] = kendall_tau_b(result.prestige, reference[name])
        report.rows.append(row)
    return report


def _stop_params(stop: StoppingRule) -> dict:
    return {
        "mode": stop.mode,
        "iterations": stop.iterations,
        "epsilon": stop.epsilon,
        "max_iterations": stop.max_iterations,
    }
