"""scikit-learn style front ends.

``TypeSizeCoder`` is a transformer: graphs in, codewords out, with
``inverse_transform`` mapping codewords back to canonical structures.
``ErdosRenyiRate`` fits the edge probability from sample graphs and reports
the achievable rate terms for it.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import BernoulliModel, RateReport, theoretical_rate_bound
from .cache import get_codebook
from .exceptions import DomainError
from .graphs import Structure
from .tscode import DEFAULT_N_MAX_EXACT, codeword_length, index_to_codeword
from .validation import check_codewords, check_graphs


class TypeSizeCoder(TransformerMixin, BaseEstimator):
    """One-to-one Type Size code over unlabeled graphs on ``n`` vertices.

    Parameters
    ----------
    n : int or None
        Vertex count.  If None it is taken from the graphs passed to ``fit``.
    n_max_exact : int
        Largest n for which the exact codebook may be built.
    cache_dir : path or None
        Directory for the codebook cache; None builds in memory every time.
    """

    def __init__(self, n=None, n_max_exact=DEFAULT_N_MAX_EXACT, cache_dir=None):
        self.n = n
        self.n_max_exact = n_max_exact
        self.cache_dir = cache_dir

    def fit(self, X=None, y=None):
        n = self.n
        if X is not None:
            graphs = check_graphs(X, n)
            n = graphs[0].n
        if n is None:
            raise DomainError("set n or pass graphs to fit")
        self.codebook_ = get_codebook(n, self.cache_dir, self.n_max_exact)
        self.n_ = n
        self.n_structures_ = len(self.codebook_)
        return self

    def transform(self, X):
        check_is_fitted(self, "codebook_")
        graphs = check_graphs(X, self.n_)
        return np.array([self.codebook_.encode(g) for g in graphs], dtype=object)

    def inverse_transform(self, X) -> list[Structure]:
        check_is_fitted(self, "codebook_")
        return [self.codebook_.decode(c) for c in check_codewords(X)]

    def code_lengths(self, X) -> np.ndarray:
        check_is_fitted(self, "codebook_")
        graphs = check_graphs(X, self.n_)
        return np.array([codeword_length(self.codebook_.index_of(g)) for g in graphs])

    def codewords(self) -> list[str]:
        check_is_fitted(self, "codebook_")
        return [index_to_codeword(i) for i in range(self.n_structures_)]


class ErdosRenyiRate(BaseEstimator):
    """Edge-probability fit plus the explicit rate terms at that probability."""

    def __init__(self, eps=0.1):
        self.eps = eps

    def fit(self, X, y=None):
        graphs = check_graphs(X)
        m = graphs[0].m
        if m == 0:
            raise DomainError("need graphs with at least 2 vertices")
        edges = sum(g.j for g in graphs)
        p = edges / (m * len(graphs))
        if not 0.0 < p < 1.0:
            raise DomainError(f"fitted edge probability {p} is degenerate")
        self.n_ = graphs[0].n
        self.p_ = p
        self.model_ = BernoulliModel(p)
        return self

    def rate_bound(self, n=None, eps=None) -> RateReport:
        check_is_fitted(self, "p_")
        return theoretical_rate_bound(self.n_ if n is None else n, self.p_, self.eps if eps is None else eps)

    def score(self, X, y=None) -> float:
        """Mean log2-likelihood per vertex pair of the labeled graphs under p_."""
        check_is_fitted(self, "p_")
        graphs = check_graphs(X, self.n_)
        lp, lq = np.log2(self.p_), np.log2(1.0 - self.p_)
        return float(np.mean([(g.j * lp + (g.m - g.j) * lq) / g.m for g in graphs]))
