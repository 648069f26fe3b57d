"""Coupled prestige/bias fixed-point iteration with convergence control.

Each iteration computes the full prestige vector from the previous bias vector
(average incoming trust score weighted by the rater's trustworthiness ``1-b``),
then the full bias vector from the new prestige; the two half-steps never mix.
Starting from bias 0, successive prestige iterates contract geometrically with
the bias function's contraction factor, so a fixed iteration budget of
``ceil(log(eps) / log(factor))`` guarantees accuracy ``eps``; 15 iterations
suffice at the default factor 1/2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bias_functions import BiasFunctionSpec, _evaluate_slice
from .errors import DimensionError, DomainError, VariantMismatchError
from .graph import TrustGraph

_MODES = ("fixed", "residual", "epsilon")


@dataclass(frozen=True)
class StoppingRule:
    """When to stop iterating.

    ``fixed`` runs exactly ``iterations`` rounds. ``residual`` stops once the
    max-norm change of the prestige vector drops below ``epsilon`` (capped at
    ``max_iterations``, flagged when the cap fires first). ``epsilon`` derives
    the iteration count from the contraction factor via
    :func:`required_iterations`.
    """

    mode: str = "fixed"
    iterations: int = 15
    epsilon: float | None = None
    max_iterations: int = 200

    def __post_init__(self):
        if self.mode not in _MODES:
            raise DomainError(f"unknown stopping mode {self.mode!r}")
        if self.mode == "fixed":
            if self.iterations < 1:
                raise DomainError("iteration count must be at least 1")
            if self.max_iterations < self.iterations:
                raise DomainError("max_iterations must be >= iterations")
        else:
            if self.epsilon is None or not self.epsilon > 0:
                raise DomainError("epsilon must be positive")

    @classmethod
    def fixed(cls, iterations: int = 15) -> "StoppingRule":
        return cls(mode="fixed", iterations=iterations, max_iterations=max(iterations, 200))

    @classmethod
    def residual_threshold(cls, epsilon: float, max_iterations: int = 200) -> "StoppingRule":
        return cls(mode="residual", epsilon=epsilon, max_iterations=max_iterations)

    @classmethod
    def epsilon_bound(cls, epsilon: float) -> "StoppingRule":
        return cls(mode="epsilon", epsilon=epsilon)


DEFAULT_STOP = StoppingRule.fixed(15)

MB_SIGNED_CONTRACTION = 0.5


@dataclass
class SolveResult:
    """Converged scores plus the iteration trace.

    ``residual_history[t]`` is the max-norm difference between prestige
    iterates t+1 and t+2, so it is empty after a single iteration. ``bias``
    always equals the bias map applied to ``prestige``. ``raw_bias`` is filled
    for the mb variant only (the unclipped signed mean, whose absolute value
    is the mb ranking score).
    """

    prestige: np.ndarray
    bias: np.ndarray
    iterations_run: int
    residual_history: np.ndarray
    converged: bool = True
    raw_bias: np.ndarray | None = None
    prestige_iterates: list[np.ndarray] = field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return float(self.residual_history[-1]) if self.residual_history.size else 0.0

    def bias_ranking_scores(self) -> np.ndarray:
        """Scores to rank nodes by bias: |raw| for mb, the bias itself otherwise."""
        return np.abs(self.raw_bias) if self.raw_bias is not None else self.bias


def required_iterations(decay: float, epsilon: float) -> int:
    """Iterations needed for max-norm accuracy ``epsilon`` at contraction ``decay``."""
    if decay < 0 or decay >= 1:
        raise DomainError(f"decay must lie in [0, 1), got {decay}")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    if decay == 0:
        return 1
    # tiny slack so exact powers (e.g. 0.5^15) do not spill to the next integer
    return max(1, math.ceil(math.log(epsilon) / math.log(decay) - 1e-12))


def _spans(n: int, parts: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


class _NodeParallel:
    """Run f(lo, hi) over contiguous node spans, optionally on a thread pool.

    Per-node reductions read fixed adjacency segments, so the concatenated
    result is bitwise identical for any worker count.
    """

    def __init__(self, n: int, threads: int):
        threads = max(1, int(threads))
        self._n = n
        self._spans = _spans(n, threads)
        self._pool = ThreadPoolExecutor(threads) if len(self._spans) > 1 else None

    def map(self, fn) -> np.ndarray:
        if self._pool is None:
            return fn(0, self._n)
        parts = self._pool.map(lambda span: fn(span[0], span[1]), self._spans)
        return np.concatenate(list(parts))

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def _check_initial_bias(initial_bias, n: int, low: float) -> np.ndarray:
    if initial_bias is None:
        return np.zeros(n)
    b = np.asarray(initial_bias, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"initial bias has shape {b.shape}, expected ({n},)")
    if not np.all(np.isfinite(b)) or b.min() < low or b.max() > 1.0:
        raise DomainError(f"initial bias entries must lie in [{low:g}, 1]")
    return b.copy()


def _iterate(prestige_step, bias_step, stop: StoppingRule, budget: int,
             b0: np.ndarray, record_iterates: bool):
    bias = b0
    prev = None
    residuals: list[float] = []
    iterates: list[np.ndarray] = []
    converged = True
    t = 0
    while True:
        t += 1
        prestige = prestige_step(bias)
        if record_iterates:
            iterates.append(prestige)
        if prev is not None:
            residuals.append(float(np.max(np.abs(prestige - prev))) if prestige.size else 0.0)
        bias = bias_step(prestige)
        if stop.mode == "residual":
            if residuals and residuals[-1] < stop.epsilon:
                break
            if t >= stop.max_iterations:
                converged = bool(residuals) and residuals[-1] < stop.epsilon
                break
        elif t >= budget:
            break
        prev = prestige
    return prestige, bias, t, np.asarray(residuals), converged, iterates


def solve(
    graph: TrustGraph,
    spec: BiasFunctionSpec,
    stop: StoppingRule = DEFAULT_STOP,
    *,
    initial_bias=None,
    record_iterates: bool = False,
    threads: int = 1,
) -> SolveResult:
    """Run the coupled iteration for one bias-function variant.

    The mb variant on a signed graph is handed to :func:`solve_mb_signed`,
    which applies the sign-gated trustworthiness rule. ``initial_bias``
    overrides the all-zeros starting bias (the fixed point does not depend on
    it, only the transient does).
    """
    if spec.variant == "mb" and graph.signed:
        return solve_mb_signed(
            graph, stop, initial_bias=initial_bias,
            record_iterates=record_iterates, threads=threads,
        )
    spec.validate_for_graph(graph)
    b0 = _check_initial_bias(initial_bias, graph.node_count, 0.0)
    budget = _iteration_budget(spec, stop)

    with _NodeParallel(graph.node_count, threads) as pool:

        def prestige_step(bias):
            one_minus_b = 1.0 - bias
            return pool.map(lambda lo, hi: _prestige_slice(graph, one_minus_b, lo, hi))

        def bias_step(r):
            return pool.map(
                lambda lo, hi: _evaluate_slice(spec.variant, r, graph, spec.decay, lo, hi)
            )

        prestige, bias, t, residuals, converged, iterates = _iterate(
            prestige_step, bias_step, stop, budget, b0, record_iterates
        )
        raw = None
        if spec.variant == "mb":
            raw = pool.map(lambda lo, hi: _evaluate_slice("mb-raw", prestige, graph, 0.0, lo, hi))

    return SolveResult(prestige, bias, t, residuals, converged, raw, iterates)


def solve_mb_signed(
    graph: TrustGraph,
    stop: StoppingRule = DEFAULT_STOP,
    *,
    initial_bias=None,
    record_iterates: bool = False,
    threads: int = 1,
) -> SolveResult:
    """The mb iteration for signed graphs.

    The trustworthiness discount for an edge applies only when the rater's
    bias and the edge sign agree: the per-edge factor is
    ``1 - max(0, b_rater * sign(w))``. The bias kept in the result is the raw
    signed mean (also exposed as ``raw_bias``); rank nodes by its absolute
    value.
    """
    if not graph.signed:
        raise VariantMismatchError("the signed mb iteration needs a signed graph")
    b0 = _check_initial_bias(initial_bias, graph.node_count, -1.0)
    budget = stop.iterations if stop.mode == "fixed" else stop.max_iterations
    if stop.mode == "epsilon":
        budget = required_iterations(MB_SIGNED_CONTRACTION, stop.epsilon)

    edge_sign = np.sign(graph.in_weights)

    with _NodeParallel(graph.node_count, threads) as pool:

        def prestige_step(bias):
            def run(lo, hi):
                a, b = graph.in_ptr[lo], graph.in_ptr[hi]
                gate = np.maximum(0.0, bias[graph.in_src[a:b]] * edge_sign[a:b])
                contrib = graph.in_weights[a:b] * (1.0 - gate)
                sums = np.bincount(graph.in_dst[a:b] - lo, weights=contrib, minlength=hi - lo)
                deg = graph.in_degree[lo:hi]
                return np.divide(sums, deg, out=np.zeros(hi - lo), where=deg > 0)

            return pool.map(run)

        def bias_step(r):
            return pool.map(lambda lo, hi: _evaluate_slice("mb-raw", r, graph, 0.0, lo, hi))

        prestige, bias, t, residuals, converged, iterates = _iterate(
            prestige_step, bias_step, stop, budget, b0, record_iterates
        )

    return SolveResult(prestige, bias, t, residuals, converged, bias.copy(), iterates)


def _iteration_budget(spec: BiasFunctionSpec, stop: StoppingRule) -> int:
    if stop.mode == "fixed":
        return stop.iterations
    if stop.mode == "epsilon":
        return required_iterations(spec.effective_contraction, stop.epsilon)
    return stop.max_iterations


def _prestige_slice(graph: TrustGraph, one_minus_b: np.ndarray, lo: int, hi: int) -> np.ndarray:
    a, b = graph.in_ptr[lo], graph.in_ptr[hi]
    contrib = graph.in_weights[a:b] * one_minus_b[graph.in_src[a:b]]
    sums = np.bincount(graph.in_dst[a:b] - lo, weights=contrib, minlength=hi - lo)
    deg = graph.in_degree[lo:hi]
    return np.divide(sums, deg, out=np.zeros(hi - lo), where=deg > 0)
