from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsgraph.exceptions import DomainError, InvalidPairError, ParseError
from tsgraph.graph6 import parse_graph6, read_graph6_lines, write_graph6
from tsgraph.graphs import (
    ErModel,
    LabeledGraph,
    are_isomorphic,
    canonicalize,
    complement,
    num_pairs,
    pair_index,
    pair_of,
    permute,
    sample_edge_counts,
    sample_er,
)


@st.composite
def graphs(draw, n_min=1, n_max=7):
    n = draw(st.integers(n_min, n_max))
    bits = draw(st.lists(st.integers(0, 1), min_size=num_pairs(n), max_size=num_pairs(n)))
    return LabeledGraph(n, tuple(bits))


def brute_canon(n, edge_set):
    """Independent oracle: smallest sorted 0/1 tuple over every relabeling."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    best, hits = None, 0
    for perm in itertools.permutations(range(n)):
        moved = {frozenset((perm[u], perm[v])) for u, v in edge_set}
        vec = tuple(int(frozenset(p) in moved) for p in pairs)
        if best is None or vec < best:
            best, hits = vec, 1
        elif vec == best:
            hits += 1
    return best, math.factorial(n) // hits


# -- pair ordering -------------------------------------------------------------

@pytest.mark.parametrize("u,v,n,expected", [(0, 1, 4, 0), (2, 3, 4, 5), (0, 3, 4, 2)])
def test_pair_index_examples(u, v, n, expected):
    assert pair_index(u, v, n) == expected


@pytest.mark.parametrize("n", range(2, 12))
def test_pair_index_is_row_major(n):
    listed = [(u, v) for u in range(n) for v in range(u + 1, n)]
    assert [pair_index(u, v, n) for u, v in listed] == list(range(num_pairs(n)))
    assert [pair_of(i, n) for i in range(num_pairs(n))] == listed


@pytest.mark.parametrize("u,v", [(1, 1), (2, 1), (0, 4), (-1, 2)])
def test_pair_index_rejects_bad_pairs(u, v):
    with pytest.raises(InvalidPairError):
        pair_index(u, v, 4)


def test_er_model_rejects_degenerate_p():
    for p in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            ErModel(p)


def test_labeled_graph_validates():
    with pytest.raises(DomainError):
        LabeledGraph(4, (0, 1, 0))
    with pytest.raises(DomainError):
        LabeledGraph(3, (0, 2, 0))
    with pytest.raises(InvalidPairError):
        LabeledGraph.from_edge_list(3, [(1, 1)])


def test_adjacency_round_trip():
    g = LabeledGraph.from_edge_list(5, [(0, 1), (1, 4), (2, 3)])
    adj = g.adjacency()
    assert (adj == adj.T).all() and not adj.diagonal().any()
    assert LabeledGraph.from_adjacency(adj) == g
    assert g.degrees() == [1, 2, 1, 1, 1]


# -- sampling ------------------------------------------------------------------

def test_sample_er_degenerate_limits():
    # p itself must stay inside (0, 1); the limits are approached numerically
    assert sample_er(ErModel(1e-12, seed=1), 5) == LabeledGraph.empty(5)
    full = sample_er(ErModel(1.0 - 1e-12, seed=1), 5)
    assert full == LabeledGraph.complete(5) and full.j == 10


def test_sample_er_mean_density():
    model = ErModel(0.5, seed=7)
    rng = model.rng()
    j = sample_edge_counts(model, 20, 100_000, rng)
    assert abs(j.mean() / num_pairs(20) - 0.5) <= 0.01
    # the graph sampler itself, on a smaller batch
    dens = [sample_er(model, 20, rng).j / 190 for _ in range(2000)]
    assert abs(np.mean(dens) - 0.5) <= 0.01


def test_sample_er_is_seeded():
    a = [sample_er(ErModel(0.3, seed=5), 8) for _ in range(3)]
    assert a[0] == a[1] == a[2]


# -- complement ----------------------------------------------------------------

def test_complement_empty_is_complete():
    assert complement(LabeledGraph.empty(4)) == LabeledGraph.complete(4)


@given(graphs())
def test_complement_involution_and_edge_count(g):
    assert complement(complement(g)) == g
    assert complement(g).j == g.m - g.j


# -- canonicalization ----------------------------------------------------------

def test_canonicalize_examples():
    for n in range(1, 7):
        s = canonicalize(LabeledGraph.empty(n))
        assert not any(s.canon) and s.labelings == 1
    one_edge = {canonicalize(LabeledGraph.from_edge_list(4, [e])) for e in itertools.combinations(range(4), 2)}
    assert len(one_edge) == 1
    s = one_edge.pop()
    assert s.j == 1 and s.labelings == 6
    tri = canonicalize(LabeledGraph.from_edge_list(4, [(0, 1), (0, 2), (1, 2)]))
    assert tri.labelings == 4


def test_triangle_labelings_by_enumeration():
    copies = {
        frozenset(frozenset(e) for e in itertools.combinations(tri, 2))
        for tri in itertools.combinations(range(4), 3)
    }
    assert len(copies) == 4


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_canonicalize_matches_brute_force(n):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for value in range(1 << len(pairs)):
        g = LabeledGraph.from_int(n, value)
        s = canonicalize(g)
        edge_set = [p for p, b in zip(pairs, g.edges) if b]
        canon, labelings = brute_canon(n, edge_set)
        assert s.canon == canon
        assert s.labelings == labelings


@pytest.mark.parametrize("n", range(1, 7))
def test_labelings_sum_to_binomials(n):
    m = num_pairs(n)
    seen: dict[tuple, int] = {}
    for value in range(1 << m):
        s = canonicalize(LabeledGraph.from_int(n, value))
        seen[s.canon] = s.labelings
    totals = [0] * (m + 1)
    for canon, lab in seen.items():
        assert math.factorial(n) % lab == 0
        totals[sum(canon)] += lab
    assert totals == [math.comb(m, j) for j in range(m + 1)]


@settings(max_examples=200)
@given(graphs(n_min=1, n_max=8), st.randoms(use_true_random=False))
def test_canonical_form_invariants(g, rnd):
    s = canonicalize(g)
    assert s.j == g.j
    assert canonicalize(s.graph) == s
    sigma = list(range(g.n))
    rnd.shuffle(sigma)
    assert canonicalize(permute(g, sigma)) == s
    assert are_isomorphic(g, permute(g, sigma))


@settings(max_examples=100)
@given(graphs(n_min=2, n_max=7), graphs(n_min=2, n_max=7))
def test_isomorphism_agrees_with_networkx(g, h):
    if g.n != h.n:
        return
    ours = are_isomorphic(g, h)
    ref = nx.is_isomorphic(nx.from_numpy_array(g.adjacency()), nx.from_numpy_array(h.adjacency()))
    assert ours == ref


# -- graph6 --------------------------------------------------------------------

def test_graph6_examples():
    # Standard graph6 pads with zero bits: 111000 -> 56 + 63 = 'w'.
    assert write_graph6(LabeledGraph.complete(3)) == "Bw"
    assert write_graph6(LabeledGraph.empty(2)) == "A?"
    assert write_graph6(LabeledGraph.complete(2)) == "A_"
    assert write_graph6(LabeledGraph.empty(1)) == "@"


@settings(max_examples=300)
@given(graphs(n_min=1, n_max=12))
def test_graph6_matches_networkx(g):
    text = write_graph6(g)
    ref = nx.to_graph6_bytes(nx.from_numpy_array(g.adjacency()), header=False).decode().strip()
    assert text == ref
    assert parse_graph6(text) == g
    assert parse_graph6(write_graph6(g, header=True)) == g


def test_graph6_long_form():
    g = LabeledGraph.from_edge_list(70, [(0, 69), (3, 4)])
    text = write_graph6(g)
    assert text[0] == "~"
    assert parse_graph6(text) == g
    assert text == nx.to_graph6_bytes(nx.from_numpy_array(g.adjacency()), header=False).decode().strip()


@pytest.mark.parametrize(
    "text,offset",
    [("B\x10", 1), ("Bww", 2), ("Bx", 1), ("?", 0), ("", 0)],
)
def test_graph6_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_graph6(text)
    assert info.value.offset == offset


def test_graph6_line_numbers():
    with pytest.raises(ParseError) as info:
        list(read_graph6_lines(["Bw", "", "C!"]))
    assert info.value.line == 3
