"""scikit-learn style wrappers over the functional pipeline.

Inputs are sequences of :class:`~cyclelab.graph.Graph`; outputs are numpy
arrays with one row per graph.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analytic import corollary1
from .graph import Graph, check_graph, two_core_of_giant
from .packing import phi_value
from .strip import ORDER_POLICIES, classify, strip


def check_graphs(X, validate=False):
    """Return ``X`` as a list of graphs, raising ``TypeError`` otherwise."""
    if isinstance(X, Graph):
        raise TypeError("expected a sequence of graphs, got a single Graph")
    graphs = list(X)
    if not graphs:
        raise ValueError("need at least one graph")
    for g in graphs:
        if not isinstance(g, Graph):
            raise TypeError(f"expected Graph, got {type(g).__name__}")
        if validate:
            check_graph(g)
    return graphs


def check_mean_degree(c):
    c = float(c)
    if not np.isfinite(c) or c <= 1:
        raise ValueError(f"mean degree must be finite and > 1, got {c}")
    return c


class TwoCoreExtractor(TransformerMixin, BaseEstimator):
    """Map each graph to the 2-core of its giant component.

    ``scope="all"`` peels every component instead of only the giant.
    """

    def __init__(self, scope="giant", validate=False):
        self.scope = scope
        self.validate = validate

    def fit(self, X, y=None):
        if self.scope not in ("giant", "all"):
            raise ValueError(f"scope must be 'giant' or 'all', got {self.scope!r}")
        check_graphs(X, self.validate)
        self.n_graphs_seen_ = len(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_graphs_seen_")
        return [two_core_of_giant(g, scope=self.scope) for g in check_graphs(X, self.validate)]


class LongestCycleEstimator(BaseEstimator):
    """Upper estimate ``|C2| - sum phi(T)`` of the longest cycle of each graph.

    ``fit`` records, for graphs drawn from ``G(n, c/n)`` with known ``c``,
    the mean of ``estimate / n`` and its closed-form comparator.
    ``predict`` returns estimates in vertices, or as a fraction of ``n``
    when ``normalize`` is set.
    """

    def __init__(self, order_policy="min-id", normalize=False, c=None):
        self.order_policy = order_policy
        self.normalize = normalize
        self.c = c

    def _one(self, g):
        core = two_core_of_giant(g)
        res = strip(core, self.order_policy)
        trees, mass = classify(res, core)
        sum_phi = sum(phi_value(t) for t in trees)
        return core.vertex_count, sum_phi, mass

    def fit(self, X, y=None):
        if self.order_policy not in ORDER_POLICIES:
            raise ValueError(f"unknown order_policy {self.order_policy!r}")
        graphs = check_graphs(X)
        rows = np.array([self._one(g) for g in graphs], dtype=float)
        n = np.array([g.vertex_count for g in graphs], dtype=float)
        self.mean_fraction_ = float(np.mean((rows[:, 0] - rows[:, 1]) / n))
        self.reference_ = corollary1(check_mean_degree(self.c))[0] if self.c is not None else None
        self.n_graphs_seen_ = len(graphs)
        return self

    def transform(self, X):
        """Columns: core size, total deficit, non-tree mass."""
        graphs = check_graphs(X)
        return np.array([self._one(g) for g in graphs], dtype=np.int64).reshape(-1, 3)

    def predict(self, X):
        graphs = check_graphs(X)
        t = self.transform(graphs)
        est = (t[:, 0] - t[:, 1]).astype(float)
        if self.normalize:
            est /= np.array([g.vertex_count for g in graphs], dtype=float)
        return est

    def score(self, X, y):
        """Negative mean absolute error against exact values ``y``."""
        return -float(np.mean(np.abs(self.predict(X) - np.asarray(y, dtype=float))))
