"""The Type Size code for graph structures.

Structures are grouped into classes by edge count.  Classes are laid out by
ascending class size (ties: ascending j); inside a class, structures follow
ascending canonical edge vector.  The structure at global index ``i`` gets
the ``i``-th binary string of the sequence "", "0", "1", "00", "01", ...
"""
from __future__ import annotations

import bisect
import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

import numpy as np

from .counting import TypeClassTable, type_class_table
from .exceptions import CapacityError, DomainError, InvalidCodewordError, ParseError
from .graphs import (
    LabeledGraph,
    Structure,
    _bit_weights,
    _relabel_table,
    canonicalize,
    int_to_bits,
    num_pairs,
)

DEFAULT_N_MAX_EXACT = 7
# the seen-bitmap for n = 8 is 2^28 bytes; anything larger is out of reach
HARD_N_MAX = 8


# -- codewords ---------------------------------------------------------------

def index_to_codeword(i: int) -> str:
    if i < 0:
        raise DomainError(f"codeword index must be non-negative, got {i}")
    return bin(i + 1)[3:]


def codeword_to_index(c: str) -> int:
    if any(ch not in "01" for ch in c):
        raise ParseError(f"codeword {c!r} contains characters other than 0/1")
    return int("1" + c, 2) - 1


def codeword_length(i: int) -> int:
    return (i + 1).bit_length() - 1


# -- class ordering ----------------------------------------------------------

@dataclass(frozen=True)
class ClassOrdering:
    n: int
    classes: tuple[tuple[int, int], ...]  # (j, N(n, j)) in code order
    offsets: tuple[int, ...]              # len(classes) + 1 entries

    @property
    def total(self) -> int:
        return self.offsets[-1]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.classes)

    def offset_of(self, j: int) -> int:
        return self.offsets[self._position(j)]

    def _position(self, j: int) -> int:
        try:
            return self.order.index(j)
        except ValueError:
            raise DomainError(f"no class with j={j} for n={self.n}") from None

    def class_of_index(self, i: int) -> int:
        if not 0 <= i < self.total:
            raise InvalidCodewordError(f"index {i} out of range for n={self.n} ({self.total} structures)")
        return self.classes[bisect.bisect_right(self.offsets, i) - 1][0]

    def checksum(self) -> str:
        text = ";".join(f"{j}:{size}" for j, size in self.classes)
        return hashlib.sha256(f"n={self.n}|{text}".encode()).hexdigest()


def class_ordering(n: int, table: TypeClassTable | None = None) -> ClassOrdering:
    table = type_class_table(n) if table is None else table
    if table.n != n:
        raise DomainError(f"table is for n={table.n}, not n={n}")
    classes = sorted(((j, c) for j, c in enumerate(table.counts)), key=lambda jc: (jc[1], jc[0]))
    offsets = [0]
    for _, c in classes:
        offsets.append(offsets[-1] + c)
    return ClassOrdering(n, tuple(classes), tuple(offsets))


def table_with_offsets(table: TypeClassTable) -> TypeClassTable:
    ordering = class_ordering(table.n, table)
    return replace(table, offsets={j: off for (j, _), off in zip(ordering.classes, ordering.offsets)})


# -- codebook ----------------------------------------------------------------

@dataclass(frozen=True)
class Codebook:
    n: int
    ordering: ClassOrdering
    members: Mapping[int, tuple[int, ...]]   # j -> sorted canonical keys
    labelings: Mapping[int, int]             # canonical key -> n!/|Aut|
    _index: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self._index:
            for (j, size), off in zip(self.ordering.classes, self.ordering.offsets):
                keys = self.members[j]
                if len(keys) != size:
                    raise DomainError(f"class j={j} holds {len(keys)} structures, expected {size}")
                for r, key in enumerate(keys):
                    self._index[key] = off + r

    @property
    def m(self) -> int:
        return num_pairs(self.n)

    def __len__(self) -> int:
        return self.ordering.total

    def structure_of_key(self, key: int) -> Structure:
        return Structure(self.n, int_to_bits(key, self.m), self.labelings[key])

    def structure_at(self, index: int) -> Structure:
        j = self.ordering.class_of_index(index)
        key = self.members[j][index - self.ordering.offset_of(j)]
        return self.structure_of_key(key)

    def index_of(self, s: Structure | LabeledGraph) -> int:
        if s.n != self.n:
            raise DomainError(f"graph has n={s.n}, codebook is for n={self.n}")
        if not isinstance(s, Structure):
            s = canonicalize(s)
        try:
            return self._index[s.key]
        except KeyError:
            raise DomainError("structure is not in canonical form") from None

    def structures(self) -> Iterator[Structure]:
        for j, _ in self.ordering.classes:
            for key in self.members[j]:
                yield self.structure_of_key(key)

    def code_lengths(self) -> list[int]:
        return [codeword_length(i) for i in range(len(self))]

    def encode(self, g: LabeledGraph | Structure) -> str:
        return index_to_codeword(self.index_of(g))

    def decode(self, c: str) -> Structure:
        i = codeword_to_index(c)
        if i >= len(self):
            raise InvalidCodewordError(
                f"codeword {c!r} (index {i}) is beyond the {len(self)} structures for n={self.n}"
            )
        return self.structure_at(i)

    def rank_in_class(self, s: Structure | LabeledGraph) -> int:
        i = self.index_of(s)
        return i - self.ordering.offset_of(self.ordering.class_of_index(i))

    def unrank_in_class(self, j: int, r: int) -> Structure:
        if not 0 <= j <= self.m:
            raise DomainError(f"j={j} outside [0, {self.m}]")
        keys = self.members[j]
        if not 0 <= r < len(keys):
            raise DomainError(f"rank {r} outside [0, {len(keys)}) for class j={j}")
        return self.structure_of_key(keys[r])


def enumerate_structures(n: int) -> dict[int, int]:
    """Canonical key -> labelings for every structure on n vertices.

    Sweeps all 2^m labeled graphs in integer order.  The smallest graph not yet
    covered is the min-lex member of a new orbit; its full orbit is generated
    in one vectorized pass and marked covered.
    """
    m = num_pairs(n)
    if m == 0:
        return {0: 1}
    table = _relabel_table(n)
    weights = _bit_weights(m)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    seen = np.zeros(1 << m, dtype=bool)
    found: dict[int, int] = {}
    ptr = 0
    while ptr < seen.size:
        ptr += int(np.argmin(seen[ptr:]))
        if seen[ptr]:
            break
        bits = (ptr >> shifts) & 1
        keys = bits[table] @ weights
        orbit = np.unique(keys)
        assert orbit[0] == ptr
        seen[orbit] = True
        found[ptr] = int(orbit.size)
    return found


def build_codebook(n: int, n_max_exact: int = DEFAULT_N_MAX_EXACT) -> Codebook:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > min(n_max_exact, HARD_N_MAX):
        raise CapacityError(
            f"exact codebook limited to n <= {min(n_max_exact, HARD_N_MAX)} (got n={n}); "
            "use the length-only analysis (rate --mode bracket/bound) for larger n"
        )
    found = enumerate_structures(n)
    ordering = class_ordering(n)
    members: dict[int, list[int]] = {j: [] for j, _ in ordering.classes}
    for key in sorted(found):
        members[key.bit_count()].append(key)
    return Codebook(n, ordering, {j: tuple(v) for j, v in members.items()}, found)


def encode(g: LabeledGraph, cb: Codebook) -> str:
    return cb.encode(g)


def decode(c: str, cb: Codebook) -> Structure:
    return cb.decode(c)


def rank_in_class(s: Structure | LabeledGraph, cb: Codebook) -> int:
    return cb.rank_in_class(s)


def unrank_in_class(n: int, j: int, r: int, cb: Codebook) -> Structure:
    if n != cb.n:
        raise DomainError(f"codebook is for n={cb.n}, not n={n}")
    return cb.unrank_in_class(j, r)


# -- probabilities -----------------------------------------------------------

def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"edge probability must lie in (0, 1), got {p}")


def log2_graph_probability(m: int, j: int, p: float) -> float:
    """log2 of p^j (1-p)^(m-j): the probability of any one labeled graph."""
    return j * math.log2(p) + (m - j) * math.log2(1.0 - p)


def structure_probability(s: Structure, p: float) -> float:
    _check_p(p)
    return 2.0 ** (math.log2(s.labelings) + log2_graph_probability(s.m, s.j, p))


def class_masses(n: int, p: float) -> list[float]:
    """P(j(S) = j) = C(m, j) p^j (1-p)^(m-j), evaluated in log space."""
    _check_p(p)
    m = num_pairs(n)
    lc = [math.lgamma(m + 1) - math.lgamma(j + 1) - math.lgamma(m - j + 1) for j in range(m + 1)]
    lp, lq = math.log(p), math.log1p(-p)
    return [math.exp(lc[j] + j * lp + (m - j) * lq) for j in range(m + 1)]


def length_distribution(n: int, p: float, cb: Codebook) -> dict[int, float]:
    if cb.n != n:
        raise DomainError(f"codebook is for n={cb.n}, not n={n}")
    _check_p(p)
    buckets: dict[int, list[float]] = {}
    for i, s in enumerate(cb.structures()):
        buckets.setdefault(codeword_length(i), []).append(structure_probability(s, p))
    return {k: math.fsum(v) for k, v in sorted(buckets.items())}


def m_epsilon(n: int, p: float, eps: float, table: TypeClassTable | Codebook | None = None) -> int:
    """Codeword budget M(eps): sum of |T_S| over structures below the chosen level.

    The infimum over real thresholds is attained at one of the finitely many
    class sizes, so levels are scanned in ascending order.
    """
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    _check_p(p)
    if isinstance(table, Codebook):
        counts = [len(table.members[j]) for j in range(table.m + 1)]
    else:
        counts = list((type_class_table(n) if table is None else table).counts)
    masses = class_masses(n, p)
    for level in sorted(set(counts)):
        overflow = math.fsum(mass for c, mass in zip(counts, masses) if c > level)
        if overflow <= eps:
            return sum(c * c for c in counts if c <= level)
    raise AssertionError("top level always has zero overflow")
