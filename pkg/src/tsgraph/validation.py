"""Input coercion shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np

from .exceptions import DomainError
from .graph6 import parse_graph6
from .graphs import LabeledGraph, Structure
from .records import parse_codeword


def check_graph(x, n: int | None = None) -> LabeledGraph:
    """Accept a LabeledGraph, Structure, graph6 text or a square adjacency matrix."""
    if isinstance(x, LabeledGraph):
        g = x
    elif isinstance(x, Structure):
        g = x.graph
    elif isinstance(x, (str, bytes)):
        g = parse_graph6(x)
    else:
        g = LabeledGraph.from_adjacency(np.asarray(x))
    if n is not None and g.n != n:
        raise DomainError(f"expected a graph on {n} vertices, got n={g.n}")
    return g


def check_graphs(X, n: int | None = None) -> list[LabeledGraph]:
    if isinstance(X, (str, bytes, LabeledGraph, Structure)):
        raise DomainError("expected a sequence of graphs, got a single graph")
    arr = X if not isinstance(X, np.ndarray) or X.ndim != 2 else [X]
    graphs = [check_graph(x, n) for x in arr]
    if not graphs:
        raise DomainError("no graphs given")
    sizes = {g.n for g in graphs}
    if len(sizes) > 1:
        raise DomainError(f"graphs have mixed vertex counts {sorted(sizes)}")
    return graphs


def check_codewords(C) -> list[str]:
    if isinstance(C, str):
        raise DomainError("expected a sequence of codewords, got a single string")
    out = []
    for c in C:
        out.append("" if c is None else parse_codeword(c) if c else "")
    return out
