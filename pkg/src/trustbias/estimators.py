"""Estimator wrappers following the scikit-learn fit/attributes convention.

These classes make the rankers compose with the wider ecosystem
(``get_params``/``set_params``, ``clone``, pipelines that only need ``fit``).
The input ``X`` may be a :class:`~trustbias.graph.TrustGraph` or anything
:func:`as_trust_graph` understands, such as an ``(m, 3)`` array of edge
triples. Scoring is transductive: ``fit`` computes one score per node of the
fitted graph.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import hits_authority, pagerank
from .baselines import arithmetic_average as _arithmetic_average
from .bias_functions import BiasFunctionSpec, resolve_spec
from .errors import DomainError
from .graph import TrustGraph, build_graph
from .solver import StoppingRule, solve


def as_trust_graph(X, normalization: str = "none") -> TrustGraph:
    """Coerce estimator input to a TrustGraph.

    Accepts a TrustGraph (returned untouched), an ``(m, 2)`` or ``(m, 3)``
    array-like of edges (weight defaults to 1.0), or any iterable of
    ``(source, target[, weight])`` tuples.
    """
    if isinstance(X, TrustGraph):
        return X
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] in (2, 3):
        if arr.shape[1] == 2:
            records = [(int(s), int(t), 1.0) for s, t in arr]
        else:
            records = [(int(s), int(t), float(w)) for s, t, w in arr]
        return build_graph(records, normalization=normalization)
    raise TypeError(
        "X must be a TrustGraph or an (m, 2)/(m, 3) array-like of edge triples"
    )


class BiasPrestigeRanker(BaseEstimator):
    """Joint bias and prestige scores for the nodes of a trust graph.

    Parameters
    ----------
    variant : str
        One of ``mb``, ``l1-avg``, ``l1-max``, ``l2-avg``, ``l2-max``. On
        signed graphs the L2 variants switch to their signed forms and ``mb``
        uses the sign-gated rule automatically.
    decay : float
        Contraction factor in [0, 1); ignored by ``mb``.
    iterations : int
        Fixed iteration budget, used when ``epsilon`` is None.
    epsilon : float or None
        Target max-norm accuracy; overrides ``iterations`` when set.
    threads : int
        Worker count for the per-node half-steps; never changes the result.

    Attributes
    ----------
    prestige_, bias_ : ndarray of shape (n_nodes,)
    raw_bias_ : ndarray or None (mb only; rank by its absolute value)
    n_iter_ : int
    residuals_ : ndarray (max-norm prestige change per iteration, from the second)
    converged_ : bool
    graph_ : TrustGraph
    """

    def __init__(self, variant="l1-avg", decay=0.5, iterations=15, epsilon=None, threads=1):
        self.variant = variant
        self.decay = decay
        self.iterations = iterations
        self.epsilon = epsilon
        self.threads = threads

    def fit(self, X, y=None):
        graph = as_trust_graph(X)
        spec = resolve_spec(BiasFunctionSpec(self.variant, self.decay), graph)
        if self.epsilon is not None:
            stop = StoppingRule.epsilon_bound(self.epsilon)
        else:
            stop = StoppingRule.fixed(self.iterations)
        result = solve(graph, spec, stop, threads=self.threads)
        self.graph_ = graph
        self.prestige_ = result.prestige
        self.bias_ = result.bias
        self.raw_bias_ = result.raw_bias
        self.n_iter_ = result.iterations_run
        self.residuals_ = result.residual_history
        self.converged_ = result.converged
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        """Fit and return the per-node ``[prestige, bias]`` columns."""
        self.fit(X, y)
        return np.column_stack([self.prestige_, self.bias_])

    def bias_ranking_scores(self) -> np.ndarray:
        """Scores to rank nodes by bias (|raw| for mb)."""
        self._check_fitted()
        return np.abs(self.raw_bias_) if self.raw_bias_ is not None else self.bias_

    def _check_fitted(self):
        if not hasattr(self, "prestige_"):
            raise NotFittedError("call fit before using this estimator")


class BaselineRanker(BaseEstimator):
    """Reference prestige scorers behind the same fit/attributes surface.

    ``method`` picks the ranker: ``aa`` (mean incoming score), ``hits``
    (authority scores) or ``pagerank``. Negative edges are dropped for the
    latter two; ``weighted=False`` additionally binarizes the survivors.
    """

    def __init__(self, method="aa", damping=0.85, tolerance=None, max_iterations=200,
                 weighted=True):
        self.method = method
        self.damping = damping
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.weighted = weighted

    def fit(self, X, y=None):
        graph = as_trust_graph(X)
        if self.method == "aa":
            scores = _arithmetic_average(graph)
        elif self.method == "hits":
            tol = 1e-8 if self.tolerance is None else self.tolerance
            scores = hits_authority(graph, tol, self.max_iterations, weighted=self.weighted)
        elif self.method == "pagerank":
            tol = 1e-10 if self.tolerance is None else self.tolerance
            scores = pagerank(
                graph, self.damping, tol, self.max_iterations, weighted=self.weighted
            )
        else:
            raise DomainError(f"unknown method {self.method!r}")
        self.graph_ = graph
        self.scores_ = scores
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        self.fit(X, y)
        return self.scores_.reshape(-1, 1)
