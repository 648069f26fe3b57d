"""Command-line front end.

Commands: rank, bias-eval, prestige-eval, robustness, scalability,
lambda-sweep, synth. Inputs are SNAP-style edge lists ('#' comments,
whitespace-separated ``source target [weight]``). Exit codes: 0 success,
2 unreadable or malformed input, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .baselines import BASELINES, arithmetic_average, hits_authority, pagerank
from .bias_functions import BiasFunctionSpec, resolve_spec
from .errors import (
    DimensionError,
    DomainError,
    EdgeListParseError,
    EmptyGraphError,
    TrustBiasError,
    UndefinedAucError,
    VariantMismatchError,
)
from .experiments import (
    bias_comparison,
    lambda_sweep,
    prestige_comparison,
    robustness_experiment,
    scalability_experiment,
)
from .graph import NORMALIZATIONS, WEIGHT_MODELS, generate_synthetic, read_graph
from .solver import StoppingRule, solve

FRAMEWORK_ALGORITHMS = ("mb", "l1-avg", "l1-max", "l2-avg", "l2-max")


class ConfigError(TrustBiasError, ValueError):
    """Bad combination of command-line options."""


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, *, needs_input: bool = True):
    if needs_input:
        p.add_argument("--input", required=True, help="edge-list file to read")
    p.add_argument("--output", default="-", help="output path ('-' for stdout)")
    p.add_argument(
        "--normalization", choices=NORMALIZATIONS, default="none",
        help="weight normalization applied at load time",
    )
    p.add_argument("--lambda", dest="decay", type=float, default=0.5,
                   help="decay constant (default 0.5)")
    p.add_argument("--iterations", type=int, default=None,
                   help="fixed iteration budget (default 15)")
    p.add_argument("--epsilon", type=float, default=None,
                   help="target accuracy; mutually exclusive with --iterations")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--threads", type=int, default=1)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors, exit 3
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="trustbias",
        description="Bias and prestige scores for directed weighted trust networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="write per-node prestige and bias scores")
    _add_common(p)
    p.add_argument(
        "--algorithm", default="l1-avg",
        help=f"one of {', '.join(FRAMEWORK_ALGORITHMS + tuple(BASELINES))}",
    )

    p = sub.add_parser("bias-eval", help="bias rankings vs the variance ground truth")
    _add_common(p)
    p.add_argument("--algorithms", default=",".join(FRAMEWORK_ALGORITHMS))
    p.add_argument("--top-fraction", type=float, default=0.05)

    p = sub.add_parser("prestige-eval", help="prestige rankings vs baseline rankers")
    _add_common(p)
    p.add_argument("--algorithms", default=",".join(FRAMEWORK_ALGORITHMS))

    p = sub.add_parser("robustness", help="rank stability under spam injection")
    _add_common(p)
    p.add_argument("--algorithms", default=",".join(FRAMEWORK_ALGORITHMS))
    p.add_argument("--ratios", default="0.05,0.10,0.15,0.20",
                   help="comma-separated spam ratios")
    p.add_argument("--repeats", type=int, default=3,
                   help="seeds per ratio (seed, seed+1, ...)")

    p = sub.add_parser("scalability", help="solve time on nested node subsets")
    _add_common(p)
    p.add_argument("--algorithms", default=",".join(FRAMEWORK_ALGORITHMS))
    p.add_argument("--fractions", default="0.25,0.5,0.75,1.0")

    p = sub.add_parser("lambda-sweep", help="metric curves across decay constants")
    _add_common(p)
    p.add_argument("--algorithms", default=",".join(FRAMEWORK_ALGORITHMS))
    p.add_argument("--lambdas", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--top-fraction", type=float, default=0.05)

    p = sub.add_parser("synth", help="generate a synthetic edge list")
    _add_common(p, needs_input=False)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--degree", type=float, default=8.0)
    p.add_argument("--weights", choices=WEIGHT_MODELS, default="uniform")
    p.add_argument("--neg-fraction", type=float, default=0.2)

    return parser


def _echo_config(ns: argparse.Namespace) -> None:
    pairs = " ".join(f"{k}={v}" for k, v in sorted(vars(ns).items()))
    print(f"[trustbias] config: {pairs}", file=sys.stderr)


def _stopping_rule(ns: argparse.Namespace) -> StoppingRule:
    if ns.iterations is not None and ns.epsilon is not None:
        raise ConfigError("--iterations and --epsilon are mutually exclusive")
    if ns.epsilon is not None:
        return StoppingRule.epsilon_bound(ns.epsilon)
    return StoppingRule.fixed(ns.iterations if ns.iterations is not None else 15)


def _algorithm_specs(names: str, decay: float, graph) -> list[BiasFunctionSpec]:
    specs = []
    for name in [part.strip() for part in names.split(",") if part.strip()]:
        if name not in FRAMEWORK_ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}")
        spec = resolve_spec(BiasFunctionSpec(name, decay), graph)
        if spec.variant != name:
            print(f"[trustbias] signed graph: using {spec.variant} for {name}",
                  file=sys.stderr)
        specs.append(spec)
    if not specs:
        raise ConfigError("no algorithms selected")
    return specs


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_report(report, path: str) -> None:
    if path == "-":
        sys.stdout.write(report.to_json())
        return
    json_path = path if path.endswith(".json") else path + ".json"
    csv_path = (path[: -len(".json")] if path.endswith(".json") else path) + ".csv"
    report.write(json_path, csv_path)
    print(f"[trustbias] wrote {json_path} and {csv_path}", file=sys.stderr)


def _cmd_rank(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    stop = _stopping_rule(ns)
    name = ns.algorithm.strip()
    residual = 0.0
    iterations = 1
    if name in BASELINES:
        if name == "aa":
            prestige = arithmetic_average(graph)
        elif name == "hits":
            prestige = hits_authority(graph)
        else:
            prestige = pagerank(graph)
        bias = np.zeros(graph.node_count)
    elif name in FRAMEWORK_ALGORITHMS:
        spec = _algorithm_specs(name, ns.decay, graph)[0]
        result = solve(graph, spec, stop, threads=ns.threads)
        prestige, bias = result.prestige, result.bias
        residual = result.final_residual
        iterations = result.iterations_run
    else:
        raise ConfigError(f"unknown algorithm {name!r}")

    order = np.argsort(graph.node_labels)
    lines = ["node_id,prestige,bias"]
    for idx in order:
        lines.append(
            f"{graph.node_labels[idx]},{prestige[idx]:.12g},{bias[idx]:.12g}"
        )
    _write_text(ns.output, "\n".join(lines) + "\n")
    print(
        f"[trustbias] n={graph.node_count} m={graph.edge_count} "
        f"iterations={iterations} final_residual={residual:.6g}",
        file=sys.stderr,
    )
    return 0


def _cmd_bias_eval(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    specs = _algorithm_specs(ns.algorithms, ns.decay, graph)
    report = bias_comparison(
        graph, specs, ns.top_fraction, stop=_stopping_rule(ns), threads=ns.threads
    )
    _write_report(report, ns.output)
    return 0


def _cmd_prestige_eval(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    specs = _algorithm_specs(ns.algorithms, ns.decay, graph)
    report = prestige_comparison(graph, specs, stop=_stopping_rule(ns), threads=ns.threads)
    _write_report(report, ns.output)
    return 0


def _cmd_robustness(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    specs = _algorithm_specs(ns.algorithms, ns.decay, graph)
    if ns.repeats < 1:
        raise ConfigError("--repeats must be at least 1")
    seeds = [ns.seed + i for i in range(ns.repeats)]
    report = robustness_experiment(
        graph, _float_list(ns.ratios), seeds, specs,
        stop=_stopping_rule(ns), threads=ns.threads,
    )
    _write_report(report, ns.output)
    return 0


def _cmd_scalability(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    specs = _algorithm_specs(ns.algorithms, ns.decay, graph)
    report = scalability_experiment(
        graph, _float_list(ns.fractions), ns.seed, specs,
        stop=_stopping_rule(ns), threads=ns.threads,
    )
    _write_report(report, ns.output)
    return 0


def _cmd_lambda_sweep(ns) -> int:
    graph = read_graph(ns.input, ns.normalization)
    names = [part.strip() for part in ns.algorithms.split(",") if part.strip()]
    for name in names:
        if name not in FRAMEWORK_ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}")
    report = lambda_sweep(
        graph, _float_list(ns.lambdas), names, fraction=ns.top_fraction,
        stop=_stopping_rule(ns), threads=ns.threads,
    )
    _write_report(report, ns.output)
    return 0


def _cmd_synth(ns) -> int:
    graph = generate_synthetic(
        ns.nodes, ns.degree, ns.weights, ns.seed, neg_fraction=ns.neg_fraction
    )
    _write_text(ns.output, graph.to_edge_list_text())
    print(
        f"[trustbias] generated n={graph.node_count} m={graph.edge_count} "
        f"signed={graph.signed}",
        file=sys.stderr,
    )
    return 0


_HANDLERS = {
    "rank": _cmd_rank,
    "bias-eval": _cmd_bias_eval,
    "prestige-eval": _cmd_prestige_eval,
    "robustness": _cmd_robustness,
    "scalability": _cmd_scalability,
    "lambda-sweep": _cmd_lambda_sweep,
    "synth": _cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        _echo_config(ns)
        return _HANDLERS[ns.command](ns)
    except (FileNotFoundError, OSError) as exc:
        if isinstance(exc, (IsADirectoryError, FileNotFoundError, PermissionError)):
            print(f"[trustbias] cannot read input: {exc}", file=sys.stderr)
            return 2
        print(f"[trustbias] i/o error: {exc}", file=sys.stderr)
        return 2
    except (EdgeListParseError, EmptyGraphError) as exc:
        print(f"[trustbias] bad input: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, DomainError, VariantMismatchError, DimensionError,
            UndefinedAucError) as exc:
        print(f"[trustbias] invalid configuration: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
