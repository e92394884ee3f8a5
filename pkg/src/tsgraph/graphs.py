"""Labeled graphs over a fixed pair ordering, ER sampling and canonical forms.

Pairs are ordered row-major over the upper triangle: (0,1), (0,2), ...,
(0,n-1), (1,2), ... Bit ``i`` of an edge vector is 1 iff pair ``i`` is an
edge.  When an edge vector is packed into an integer, pair 0 is the most
significant bit, so integer order coincides with lexicographic order of the
vector.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CapacityError, DomainError, InvalidPairError

# n! relabelings are searched exhaustively; 9! x 36 is the largest table kept.
MAX_CANON_N = 9


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(u: int, v: int, n: int) -> int:
    if not (0 <= u < n and 0 <= v < n) or u == v:
        raise InvalidPairError(f"invalid pair ({u}, {v}) for n={n}")
    if u > v:
        raise InvalidPairError(f"pair ({u}, {v}) is not ordered u < v")
    # rows 0..u-1 hold (n-1) + (n-2) + ... + (n-u) pairs
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_of(index: int, n: int) -> tuple[int, int]:
    m = num_pairs(n)
    if not 0 <= index < m:
        raise InvalidPairError(f"pair index {index} out of range [0, {m})")
    u = 0
    row = n - 1
    while index >= row:
        index -= row
        u += 1
        row -= 1
    return u, u + 1 + index


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    edges: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"vertex count must be positive, got {self.n}")
        edges = tuple(int(b) for b in self.edges)
        if len(edges) != num_pairs(self.n):
            raise DomainError(
                f"edge vector has length {len(edges)}, expected {num_pairs(self.n)} for n={self.n}"
            )
        if any(b not in (0, 1) for b in edges):
            raise DomainError("edge vector must contain only 0/1")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def j(self) -> int:
        return sum(self.edges)

    @property
    def key(self) -> int:
        return bits_to_int(self.edges)

    @classmethod
    def empty(cls, n: int) -> LabeledGraph:
        return cls(n, (0,) * num_pairs(n))

    @classmethod
    def complete(cls, n: int) -> LabeledGraph:
        return cls(n, (1,) * num_pairs(n))

    @classmethod
    def from_int(cls, n: int, value: int) -> LabeledGraph:
        return cls(n, int_to_bits(value, num_pairs(n)))

    @classmethod
    def from_edge_list(cls, n: int, edge_list: Iterable[tuple[int, int]]) -> LabeledGraph:
        bits = [0] * num_pairs(n)
        for u, v in edge_list:
            if u > v:
                u, v = v, u
            bits[pair_index(u, v, n)] = 1
        return cls(n, tuple(bits))

    @classmethod
    def from_adjacency(cls, adj) -> LabeledGraph:
        a = np.asarray(adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"adjacency matrix must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise DomainError("adjacency matrix must be symmetric")
        if np.any(np.diag(a) != 0):
            raise DomainError("self-loops are not representable")
        n = a.shape[0]
        return cls(n, tuple(int(a[u, v] != 0) for u, v in pair_list(n)))

    def edge_list(self) -> list[tuple[int, int]]:
        return [p for p, b in zip(pair_list(self.n), self.edges) if b]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edge_list():
            a[u, v] = a[v, u] = 1
        return a

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edge_list():
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class Structure:
    """An isomorphism class, held as its min-lex canonical edge vector."""

    n: int
    canon: tuple[int, ...]
    labelings: int
    j: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "canon", tuple(int(b) for b in self.canon))
        object.__setattr__(self, "j", sum(self.canon))

    @property
    def m(self) -> int:
        return len(self.canon)

    @property
    def key(self) -> int:
        return bits_to_int(self.canon)

    @property
    def graph(self) -> LabeledGraph:
        return LabeledGraph(self.n, self.canon)


@dataclass(frozen=True)
class ErModel:
    p: float
    seed: int | None = 0

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"edge probability must lie in (0, 1), got {self.p}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, m: int) -> tuple[int, ...]:
    if value < 0 or value >> m:
        raise DomainError(f"{value} does not fit in {m} bits")
    return tuple((value >> (m - 1 - i)) & 1 for i in range(m))


def sample_er(model: ErModel, n: int, rng: np.random.Generator | None = None) -> LabeledGraph:
    """Draw one G(n, p) graph. Pass ``rng`` to draw a stream of graphs."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    rng = model.rng() if rng is None else rng
    bits = rng.random(num_pairs(n)) < model.p
    return LabeledGraph(n, tuple(bits.astype(int).tolist()))


def sample_edge_counts(model: ErModel, n: int, size: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Edge counts of ``size`` independent G(n, p) draws (the labels are irrelevant to j)."""
    rng = model.rng() if rng is None else rng
    return rng.binomial(num_pairs(n), model.p, size=size)


def complement(g: LabeledGraph) -> LabeledGraph:
    return LabeledGraph(g.n, tuple(1 - b for b in g.edges))


def permute(g: LabeledGraph, sigma: Sequence[int]) -> LabeledGraph:
    """Relabel vertex ``v`` as ``sigma[v]``."""
    if sorted(sigma) != list(range(g.n)):
        raise DomainError(f"{sigma!r} is not a permutation of range({g.n})")
    return LabeledGraph.from_edge_list(g.n, ((sigma[u], sigma[v]) for u, v in g.edge_list()))


@lru_cache(maxsize=None)
def _relabel_table(n: int) -> np.ndarray:
    # row s, column i: source pair feeding position i when position a holds
    # old vertex perms[s][a]
    pairs = pair_list(n)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    a = np.array([p[0] for p in pairs], dtype=np.int64)
    b = np.array([p[1] for p in pairs], dtype=np.int64)
    u = perms[:, a]
    v = perms[:, b]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    table = lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)
    return table.astype(np.int16 if n > 1 else np.int8)


@lru_cache(maxsize=None)
def _bit_weights(m: int) -> np.ndarray:
    return np.array([1 << (m - 1 - i) for i in range(m)], dtype=np.int64)


def orbit_keys(n: int, edges: Sequence[int]) -> np.ndarray:
    """Packed edge vectors of all n! relabelings (with repeats)."""
    if n > MAX_CANON_N:
        raise CapacityError(
            f"exhaustive canonicalization is limited to n <= {MAX_CANON_N}, got n={n}"
        )
    m = num_pairs(n)
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    bits = np.asarray(edges, dtype=np.int64)
    return bits[_relabel_table(n)] @ _bit_weights(m)


def canonicalize(g: LabeledGraph) -> Structure:
    """Min-lex edge vector over all vertex relabelings, with n!/|Aut| labelings.

    The permutations that reach the minimum form a coset of the automorphism
    group, so counting them gives |Aut| as a by-product of the same search.
    """
    keys = orbit_keys(g.n, g.edges)
    best = int(keys.min())
    aut = int(np.count_nonzero(keys == best))
    return Structure(g.n, int_to_bits(best, g.m), math.factorial(g.n) // aut)


def are_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    return g.n == h.n and g.j == h.j and canonicalize(g).canon == canonicalize(h).canon
