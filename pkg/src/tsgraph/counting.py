"""Counting unlabeled graphs by edge count, plus the log-size bounds around them.

All code lengths and entropies are in bits.  ``mu`` uses the natural log,
as in Wright's statement of the asymptotic.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import gmpy2

from .exceptions import DomainError
from .graphs import num_pairs

LN2 = math.log(2.0)
LOG2_SQRT_2PI = 0.5 * math.log2(2.0 * math.pi)

# Robbins: sqrt(2pi) n^(n+1/2) e^-n e^(1/(12n+1)) < n! < sqrt(2pi) n^(n+1/2) e^-n e^(1/(12n)).
# For C(m, j) the combined e-exponent lies in [-1/6, 1/12] once 1 <= j <= m-1.
STIRLING_UPPER_CONST = (1.0 / 12.0) / LN2
STIRLING_LOWER_CONST = -(1.0 / 6.0) / LN2

EXACT_COUNT_MAX_N = 40


@dataclass(frozen=True)
class TypeClassTable:
    n: int
    counts: tuple[int, ...]
    offsets: dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, j: int) -> int:
        return self.counts[j]


@dataclass(frozen=True)
class ClassSizeBounds:
    n: int
    j: int
    lower: float
    upper: float
    exact: float | None
    pivot: float
    mu: float
    wright_ok: bool
    slack_bits: float

    @property
    def c_lower(self) -> float:
        return self.lower - self.pivot

    @property
    def c_upper(self) -> float:
        return self.upper - self.pivot

    @property
    def holds(self) -> bool | None:
        if self.exact is None:
            return None
        return self.lower <= self.exact <= self.upper

    @property
    def flag(self) -> str:
        return "ok" if self.wright_ok else "Wright condition weak"


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Integer partitions of n as non-increasing tuples, in reverse lex order."""
    if n == 0:
        yield ()
        return
    a = [n]
    while True:
        yield tuple(a)
        ones = 0
        while a and a[-1] == 1:
            a.pop()
            ones += 1
        if not a:
            return
        k = a.pop() - 1
        rem = ones + 1
        a.append(k)
        while rem > k:
            a.append(k)
            rem -= k
        if rem:
            a.append(rem)


def pair_cycle_type(cycle_type: dict[int, int]) -> Counter:
    """Cycle lengths induced on vertex pairs by a permutation of given cycle type."""
    out: Counter = Counter()
    lengths = sorted(cycle_type)
    for k in lengths:
        a = cycle_type[k]
        # pairs inside one k-cycle
        if k % 2:
            out[k] += a * (k - 1) // 2
        else:
            out[k] += a * (k // 2 - 1)
            out[k // 2] += a
        # pairs across two distinct k-cycles
        out[k] += k * (a * (a - 1) // 2)
    for x, k in enumerate(lengths):
        for l in lengths[x + 1:]:
            g = math.gcd(k, l)
            out[k * l // g] += g * cycle_type[k] * cycle_type[l]
    out.pop(0, None)
    return +out


def class_size(cycle_type: dict[int, int], n: int) -> int:
    denom = 1
    for k, a in cycle_type.items():
        denom *= k**a * math.factorial(a)
    return math.factorial(n) // denom


@lru_cache(maxsize=None)
def count_row(n: int) -> tuple[int, ...]:
    """N(n, j) for j = 0..C(n,2), by Burnside over conjugacy classes of S_n.

    Each class contributes its size times prod (1 + x^c) over pair cycles.  The
    polynomials are packed into big integers (base 2^w) so the products run
    in GMP.  A class with k pair cycles has coefficients <= 2^k, so classes
    are accumulated per k with slots only k + log2(n!) bits wide.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    m = num_pairs(n)
    fact = math.factorial(n)
    fbits = fact.bit_length()
    acc: dict[int, gmpy2.mpz] = {}
    for part in partitions(n):
        ct = dict(Counter(part))
        pcs = pair_cycle_type(ct)
        k = sum(pcs.values())
        w = k + fbits + 1
        poly = gmpy2.mpz(1)
        for c, r in pcs.items():
            factor = (gmpy2.mpz(1) << (c * w)) + 1
            poly *= factor if r == 1 else factor**r
        acc[k] = acc.get(k, gmpy2.mpz(0)) + class_size(ct, n) * poly
    sums = [0] * (m + 1)
    for k, packed in acc.items():
        w = k + fbits + 1
        mask = (gmpy2.mpz(1) << w) - 1
        for j in range(m + 1):
            sums[j] += int((packed >> (j * w)) & mask)
    row = []
    for s in sums:
        q, r = divmod(s, fact)
        assert r == 0, "Burnside sum not divisible by n!"
        row.append(q)
    return tuple(row)


def exact_count(n: int, j: int) -> int:
    m = num_pairs(n)
    if not 0 <= j <= m:
        raise DomainError(f"edge count j={j} outside [0, {m}] for n={n}")
    return count_row(n)[j]


def type_class_table(n: int) -> TypeClassTable:
    return TypeClassTable(n, count_row(n))


def log2_int(x: int) -> float:
    """log2 of a (possibly huge, possibly gmpy2) positive integer."""
    if x <= 0:
        raise DomainError(f"log2 of non-positive integer {x}")
    x = int(x)
    shift = max(x.bit_length() - 64, 0)
    return math.log2(x >> shift) + shift


def log2_factorial(n: int) -> float:
    return math.lgamma(n + 1) / LN2


def lambda_approx(n: int, j: int) -> Fraction:
    """Wright's approximation C(C(n,2), j) / n!, exactly."""
    m = num_pairs(n)
    if not 0 <= j <= m:
        raise DomainError(f"edge count j={j} outside [0, {m}] for n={n}")
    return Fraction(math.comb(m, j), math.factorial(n))


def log2_lambda(n: int, j: int) -> float:
    m = num_pairs(n)
    if not 0 <= j <= m:
        raise DomainError(f"edge count j={j} outside [0, {m}] for n={n}")
    return log2_int(math.comb(m, j)) - log2_int(math.factorial(n))


def wright_ratio(n: int, j: int) -> Fraction:
    """N(n, j) / Lambda(n, j); always >= 1 since no orbit exceeds n! graphs."""
    return exact_count(n, j) / lambda_approx(n, j)


def mu(n: int, j: int) -> float:
    return 2.0 * j / n - math.log(n)


def wright_condition(n: int, j: int, mu_min: float = 10.0) -> bool:
    return mu(n, j) >= mu_min


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def empirical_entropy(s) -> float:
    """Binary entropy of the edge density j/m of a graph or structure."""
    m = num_pairs(s.n)
    if m == 0:
        return 0.0
    return binary_entropy(s.j / m)


def _check_inner(m: int, j: int) -> None:
    if not 0 < j < m:
        raise DomainError(
            f"Stirling bounds need 0 < j < m (got j={j}, m={m}); the empty and complete classes are singletons"
        )


def _stirling_core(m: int, j: int) -> float:
    # (m+1/2)log m - j log j - jc log jc - (log j + log jc)/2 - log sqrt(2pi)
    #   == m*H(j/m) + (log m - log j - log jc)/2 - log sqrt(2pi)
    jc = m - j
    return m * binary_entropy(j / m) + 0.5 * (math.log2(m) - math.log2(j) - math.log2(jc)) - LOG2_SQRT_2PI


def stirling_upper(m: int, j: int) -> float:
    _check_inner(m, j)
    return _stirling_core(m, j) + STIRLING_UPPER_CONST


def stirling_lower(m: int, j: int) -> float:
    _check_inner(m, j)
    return _stirling_core(m, j) + STIRLING_LOWER_CONST


def class_size_bounds(
    n: int,
    j: int,
    slack_bits: float = 2.0,
    mu_min: float = 10.0,
    exact: bool = True,
) -> ClassSizeBounds:
    """Bit bounds on log2 N(n, j).

    The lower end is Stirling-lower minus log2 n!, which is rigorous because
    N >= Lambda.  The upper end adds ``slack_bits`` to cover Wright's
    unquantified (1 + O(exp(-C mu))) factor, so it is only claimed when
    ``mu >= mu_min``.
    """
    m = num_pairs(n)
    _check_inner(m, j)
    lf = log2_factorial(n)
    pivot = m * binary_entropy(j / m) - lf
    ex = log2_int(exact_count(n, j)) if exact and n <= EXACT_COUNT_MAX_N else None
    mval = mu(n, j)
    return ClassSizeBounds(
        n=n,
        j=j,
        lower=stirling_lower(m, j) - lf,
        upper=stirling_upper(m, j) - lf + slack_bits,
        exact=ex,
        pivot=pivot,
        mu=mval,
        wright_ok=mval >= mu_min,
        slack_bits=slack_bits,
    )


CSV_FIELDS = ("n", "j", "N_exact", "log2_lambda", "mu", "lower_bits", "upper_bits")


def count_rows(n: int, js=None, slack_bits: float = 2.0, mu_min: float = 10.0) -> list[dict]:
    m = num_pairs(n)
    js = range(m + 1) if js is None else js
    rows = []
    for j in js:
        row = {
            "n": n,
            "j": j,
            "N_exact": exact_count(n, j),
            "log2_lambda": log2_lambda(n, j),
            "mu": mu(n, j),
            "lower_bits": None,
            "upper_bits": None,
        }
        if 0 < j < m:
            b = class_size_bounds(n, j, slack_bits=slack_bits, mu_min=mu_min, exact=False)
            row["lower_bits"] = b.lower
            row["upper_bits"] = b.upper
        rows.append(row)
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else row[k])) for k in CSV_FIELDS})
    return buf.getvalue()
