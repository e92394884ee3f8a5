from __future__ import annotations

import csv
import io
import math
from collections import Counter
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsgraph.counting import (
    CSV_FIELDS,
    class_size_bounds,
    count_row,
    count_rows,
    empirical_entropy,
    exact_count,
    lambda_approx,
    log2_int,
    log2_lambda,
    mu,
    pair_cycle_type,
    partitions,
    rows_to_csv,
    stirling_lower,
    stirling_upper,
    type_class_table,
    wright_ratio,
)
from tsgraph.exceptions import DomainError
from tsgraph.graphs import LabeledGraph, canonicalize, num_pairs


@pytest.fixture(scope="module")
def atlas_census():
    """Unlabeled graphs per (n, j) from the networkx graph atlas (all graphs on <= 7 nodes)."""
    census = Counter((g.number_of_nodes(), g.number_of_edges()) for g in nx.graph_atlas_g())
    return census


def test_partitions_counts():
    # p(n) for n = 0..11
    assert [sum(1 for _ in partitions(n)) for n in range(12)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]
    for n in range(1, 10):
        parts = list(partitions(n))
        assert len(set(parts)) == len(parts)
        assert all(sum(p) == n and list(p) == sorted(p, reverse=True) for p in parts)


@pytest.mark.parametrize("part", [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,), (3, 2), (4, 2, 1), (6,)])
def test_pair_cycle_type_by_direct_action(part):
    # build a permutation of this cycle type and follow it on pairs
    n = sum(part)
    perm, start = [0] * n, 0
    for k in part:
        for i in range(k):
            perm[start + i] = start + (i + 1) % k
        start += k
    pairs = {frozenset((u, v)) for u in range(n) for v in range(u + 1, n)}
    lengths: Counter = Counter()
    while pairs:
        first = pairs.pop()
        cur, length = first, 1
        while True:
            cur = frozenset(perm[x] for x in cur)
            if cur == first:
                break
            pairs.discard(cur)
            length += 1
        lengths[length] += 1
    assert pair_cycle_type(dict(Counter(part))) == lengths


def test_exact_count_examples():
    assert list(count_row(4)) == [1, 1, 2, 3, 2, 1, 1]
    assert exact_count(1, 0) == 1
    assert exact_count(5, 2) == 2
    assert sum(count_row(5)) == 34
    assert sum(count_row(6)) == 156
    assert list(count_row(5)) == [1, 1, 2, 4, 6, 6, 6, 4, 2, 1, 1]


def test_exact_count_matches_atlas(atlas_census):
    for n in range(1, 8):
        assert list(count_row(n)) == [atlas_census[(n, j)] for j in range(num_pairs(n) + 1)]


@pytest.mark.parametrize("n", range(1, 6))
def test_exact_count_matches_canonical_census(n):
    m = num_pairs(n)
    forms = {canonicalize(LabeledGraph.from_int(n, v)).canon for v in range(1 << m)}
    assert list(count_row(n)) == [sum(1 for f in forms if sum(f) == j) for j in range(m + 1)]


def test_unlabeled_totals():
    # OEIS A000088
    known = [1, 2, 4, 11, 34, 156, 1044, 12346, 274668, 12005168, 1018997864, 165091172592]
    assert [sum(count_row(n)) for n in range(1, 13)] == known


@pytest.mark.parametrize("n", range(1, 13))
def test_row_invariants(n):
    row = count_row(n)
    assert len(row) == num_pairs(n) + 1
    assert row == row[::-1]
    assert all(c > 0 for c in row)
    # no orbit is larger than n!, so N(n, j) >= C(m, j) / n!
    assert all(c * math.factorial(n) >= math.comb(num_pairs(n), j) for j, c in enumerate(row))


def test_exact_count_domain():
    with pytest.raises(DomainError):
        exact_count(4, 7)
    with pytest.raises(DomainError):
        exact_count(0, 0)


def test_big_counts():
    big = exact_count(30, 200)
    assert big > 2**64
    assert type_class_table(30).counts[200] == big


def test_lambda_and_mu_examples():
    assert lambda_approx(4, 3) == Fraction(20, 24)
    assert lambda_approx(7, 0) == Fraction(1, math.factorial(7))
    assert mu(4, 3) == pytest.approx(1.5 - math.log(4))
    assert mu(4, 3) == pytest.approx(0.1137, abs=1e-4)
    assert mu(30, 200) == pytest.approx(9.93, abs=0.01)
    assert all(mu(n, 0) < 0 for n in range(2, 20))
    assert log2_lambda(4, 3) == pytest.approx(math.log2(20 / 24))


def test_wright_ratio_in_regime():
    r = wright_ratio(30, 200)
    assert 1 < r < Fraction(105, 100)


def test_empirical_entropy_examples():
    assert empirical_entropy(canonicalize(LabeledGraph.empty(5))) == 0.0
    assert empirical_entropy(canonicalize(LabeledGraph.complete(5))) == 0.0
    assert empirical_entropy(canonicalize(LabeledGraph.from_edge_list(4, [(0, 1), (1, 2), (2, 3)]))) == 1.0
    s = canonicalize(LabeledGraph.from_edge_list(5, [(0, 1), (2, 3)]))
    assert empirical_entropy(s) == pytest.approx(-0.2 * math.log2(0.2) - 0.8 * math.log2(0.8))
    assert empirical_entropy(s) == pytest.approx(0.7219, abs=1e-4)


def test_log2_int_handles_huge_values():
    assert log2_int(1) == 0.0
    assert log2_int(2**5000) == 5000.0
    assert log2_int(3 * 2**4000) == pytest.approx(4000 + math.log2(3))


def test_stirling_examples():
    assert stirling_lower(6, 3) <= math.log2(20) <= stirling_upper(6, 3)
    m = 10_000
    assert stirling_upper(m, 3000) - stirling_lower(m, 3000) <= 2 * math.log2(m)
    with pytest.raises(DomainError):
        stirling_upper(6, 0)
    with pytest.raises(DomainError):
        stirling_lower(6, 6)


@given(st.integers(2, 3000).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m - 1))))
def test_stirling_sandwich_and_symmetry(mj):
    m, j = mj
    exact = log2_int(math.comb(m, j))
    lo, hi = stirling_lower(m, j), stirling_upper(m, j)
    assert lo <= exact <= hi
    assert lo == pytest.approx(stirling_lower(m, m - j), abs=1e-9)
    assert hi == pytest.approx(stirling_upper(m, m - j), abs=1e-9)


def test_class_size_bounds_examples():
    b = class_size_bounds(30, 200)
    assert b.lower - 2 <= b.exact <= b.upper + 2
    assert b.holds
    # mu(30, 200) = 9.93 sits just under the default mu_min = 10
    assert b.flag == "Wright condition weak"
    assert class_size_bounds(30, 200, mu_min=9.0).flag == "ok"
    weak = class_size_bounds(4, 3)
    assert weak.flag == "Wright condition weak"
    assert not weak.wright_ok
    with pytest.raises(DomainError):
        class_size_bounds(4, 0)


def test_class_size_bound_gap_is_n_free():
    # gap minus the 1/2 log terms is the same constant for every n and j
    consts = set()
    for n in (10, 25, 40):
        m = num_pairs(n)
        for j in range(1, m):
            b = class_size_bounds(n, j, exact=False)
            consts.add(round(b.upper - b.lower, 9))
    assert len(consts) == 1


@pytest.mark.parametrize("n", [8, 12, 20])
def test_class_size_lower_bound_is_rigorous(n):
    m = num_pairs(n)
    for j in range(1, m):
        b = class_size_bounds(n, j)
        assert b.lower <= b.exact


def test_csv_export():
    text = rows_to_csv(count_rows(4))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_FIELDS
    assert [int(r["N_exact"]) for r in rows] == [1, 1, 2, 3, 2, 1, 1]
    assert rows[0]["lower_bits"] == "" and rows[3]["lower_bits"] != ""
