"""Rate bounds, exact and bracketed epsilon-rates, and Monte Carlo validators."""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from statistics import NormalDist
from typing import Callable, Sequence

import gmpy2
import numpy as np

from .counting import (
    count_row,
    log2_factorial,
    log2_int,
    mu,
    stirling_lower,
    stirling_upper,
    type_class_table,
    wright_ratio,
)
from .exceptions import DomainError, RegimeError
from .graphs import num_pairs
from .tscode import (
    Codebook,
    TypeClassTable,
    class_masses,
    class_ordering,
    codeword_length,
    length_distribution,
    m_epsilon,
)

_STD_NORMAL = NormalDist()


# -- source model ------------------------------------------------------------

def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def entropy(p: float) -> float:
    _check_p(p)
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def varentropy(p: float) -> float:
    _check_p(p)
    return p * (1.0 - p) * math.log2((1.0 - p) / p) ** 2


@dataclass(frozen=True)
class BernoulliModel:
    p: float
    H: float = field(init=False)
    V: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "H", entropy(self.p))
        object.__setattr__(self, "V", varentropy(self.p))

    @property
    def sigma(self) -> float:
        return math.sqrt(self.V)


def q_func(x: float) -> float:
    """Standard normal upper tail."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def q_inv(eps: float) -> float:
    if not 0.0 < eps < 1.0:
        raise DomainError(f"Q^-1 needs 0 < eps < 1, got {eps}")
    return -_STD_NORMAL.inv_cdf(eps)


# -- reports -----------------------------------------------------------------

@dataclass
class RateReport:
    n: int
    p: float
    eps: float
    m: int
    entropy_bits: float
    dispersion_bits: float
    log_factorial_bits: float
    bound_bits: float
    bound_rate: float
    remainder: str = "O(1/n^2) per pair, not modeled"
    exact_length: int | None = None
    exact_rate: float | None = None
    bracket_lengths: tuple[int, int] | None = None
    rate_bracket: tuple[float, float] | None = None
    residual_bits: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = "tsgraph.rate-report/1"
        for key in ("bracket_lengths", "rate_bracket"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d


@dataclass
class BoundCheckReport:
    name: str
    parameters: dict
    observed: float
    bound: float
    verdict: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = f"tsgraph.check.{self.name}/1"
        return d


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- theoretical bound -------------------------------------------------------

def theoretical_rate_bound(n: int, p: float, eps: float) -> RateReport:
    """The three explicit terms of the achievable rate, in bits and per pair."""
    _check_p(p)
    m = num_pairs(n)
    if m == 0:
        raise DomainError("need n >= 2")
    model = BernoulliModel(p)
    h_bits = m * model.H
    disp = model.sigma * math.sqrt(m) * q_inv(eps)
    lf = log2_factorial(n)
    total = h_bits + disp - lf
    return RateReport(n, p, eps, m, h_bits, disp, lf, total, total / m)


def gamma_threshold(n: int, p: float, eps: float, A: float, delta2: float, C_U: float) -> float:
    """Per-pair level used in the achievability argument.

    The normal quantile is taken at eps - A/sqrt(m) - exp(-m delta2), which
    must stay inside (0, 1).
    """
    _check_p(p)
    m = num_pairs(n)
    adj = eps - A / math.sqrt(m) - math.exp(-m * delta2)
    if not 0.0 < adj < 1.0:
        raise RegimeError(
            f"adjusted eps {adj:.4g} is outside (0, 1) at n={n}, A={A}; n is too small for this A"
        )
    model = BernoulliModel(p)
    return model.H + model.sigma / math.sqrt(m) * q_inv(adj) - log2_factorial(n) / m + C_U / m


# -- epsilon rates -----------------------------------------------------------

def _min_k(tail: Callable[[int], float], eps: float, kmax: int) -> int:
    for k in range(kmax + 1):
        if tail(k) <= eps:
            return k
    return kmax + 1


def epsilon_length_exact(n: int, p: float, eps: float, cb: Codebook) -> int:
    """min{k : P(len >= k) <= eps} over integer k."""
    dist = length_distribution(n, p, cb)
    kmax = max(dist)

    def tail(k: int) -> float:
        return math.fsum(v for L, v in dist.items() if L >= k)

    return _min_k(tail, eps, kmax + 1)


def epsilon_rate_exact(n: int, p: float, eps: float, cb: Codebook) -> float:
    return epsilon_length_exact(n, p, eps, cb) / num_pairs(n)


def tail_bounds(n: int, p: float, table: TypeClassTable | None = None) -> tuple[list[float], list[float]]:
    """Lower/upper bounds on P(len >= k) for k = 0..kmax+1 from class data only.

    A class lying wholly past index 2^k - 1 contributes its full mass; one
    straddling it contributes an unknown share.  That share is pinned by the
    per-structure probabilities, which lie between w and n! w with
    w = p^j (1-p)^(m-j).
    """
    table = type_class_table(n) if table is None else table
    ordering = class_ordering(n, table)
    masses = class_masses(n, p)
    m = num_pairs(n)
    log2_nfact = log2_factorial(n)
    kmax = codeword_length(ordering.total - 1)
    lo_tail: list[float] = []
    hi_tail: list[float] = []
    for k in range(kmax + 2):
        b = (1 << k) - 1
        lo_parts: list[float] = []
        hi_parts: list[float] = []
        for (j, size), start in zip(ordering.classes, ordering.offsets):
            end = start + size
            mass = masses[j]
            if start >= b:
                lo_parts.append(mass)
                hi_parts.append(mass)
            elif end > b:
                above, below = end - b, b - start
                lw = (j * math.log2(p) + (m - j) * math.log2(1.0 - p)) if mass > 0 else -math.inf
                w_min = 2.0 ** (lw + log2_int(above)) if lw > -math.inf else 0.0
                w_max = 2.0 ** (lw + log2_nfact + log2_int(above)) if lw > -math.inf else 0.0
                drop_max = 2.0 ** (lw + log2_nfact + log2_int(below)) if lw > -math.inf else 0.0
                drop_min = 2.0 ** (lw + log2_int(below)) if lw > -math.inf else 0.0
                lo_parts.append(max(w_min, mass - drop_max, 0.0))
                hi_parts.append(min(mass, w_max, max(mass - drop_min, 0.0)))
        lo_tail.append(math.fsum(lo_parts))
        hi_tail.append(math.fsum(hi_parts))
    return lo_tail, hi_tail


def epsilon_length_bracket(n: int, p: float, eps: float, table: TypeClassTable | None = None) -> tuple[int, int]:
    _check_p(p)
    lo_tail, hi_tail = tail_bounds(n, p, table)
    kmax = len(lo_tail) - 1
    return _min_k(lambda k: lo_tail[k], eps, kmax), _min_k(lambda k: hi_tail[k], eps, kmax)


def epsilon_rate_bracket(n: int, p: float, eps: float, table: TypeClassTable | None = None) -> tuple[float, float]:
    lo, hi = epsilon_length_bracket(n, p, eps, table)
    m = num_pairs(n)
    return lo / m, hi / m


def rate_report(n: int, p: float, eps: float, mode: str = "bound", cb: Codebook | None = None) -> RateReport:
    report = theoretical_rate_bound(n, p, eps)
    if mode == "exact":
        if cb is None:
            raise DomainError("exact mode needs a codebook")
        k = epsilon_length_exact(n, p, eps, cb)
        report.exact_length = k
        report.exact_rate = k / report.m
        report.residual_bits = k - report.bound_bits
    elif mode == "bracket":
        lo, hi = epsilon_length_bracket(n, p, eps)
        report.bracket_lengths = (lo, hi)
        report.rate_bracket = (lo / report.m, hi / report.m)
        report.residual_bits = hi - report.bound_bits
    elif mode != "bound":
        raise DomainError(f"unknown rate mode {mode!r}")
    return report


# -- codeword budget and residual checks --------------------------------------

def budget_bound_check(
    ns: Sequence[int] = (3, 4, 5, 6),
    ps: Sequence[float] = (0.1, 0.3, 0.5, 0.7),
    epss: Sequence[float] = (0.05, 0.1, 0.25),
    codebooks: dict[int, Codebook] | None = None,
) -> BoundCheckReport:
    """m * R_n(eps) <= ceil(log2 M(eps)) on a grid, with no sampling.

    Rows also carry floor(log2 M) + 1, the length that always suffices for
    M strings under the "", "0", "1", "00", ... enumeration.
    """
    from .tscode import build_codebook

    codebooks = {} if codebooks is None else codebooks
    rows = []
    violations = 0
    worst = -math.inf
    for n in ns:
        cb = codebooks.get(n) or build_codebook(n)
        for p in ps:
            for eps in epss:
                k = epsilon_length_exact(n, p, eps, cb)
                M = m_epsilon(n, p, eps, cb)
                ceil_log = (M - 1).bit_length()
                ok = k <= ceil_log
                violations += not ok
                worst = max(worst, k - ceil_log)
                rows.append({
                    "n": n, "p": p, "eps": eps, "length": k, "M": M,
                    "ceil_log2_M": ceil_log, "floor_log2_M_plus_1": M.bit_length(),
                    "ok": ok, "ok_floor_plus_1": k <= M.bit_length(),
                })
    return BoundCheckReport(
        "budget",
        {"n": list(ns), "p": list(ps), "eps": list(epss)},
        observed=float(violations),
        bound=0.0,
        verdict=_verdict(violations == 0),
        details={"rows": rows, "max_excess_bits": worst,
                 "violations_floor_plus_1": sum(not r["ok_floor_plus_1"] for r in rows)},
    )


def residual_table(
    ns: Sequence[int] = (4, 5, 6, 7),
    ps: Sequence[float] = (0.2, 0.3),
    epss: Sequence[float] = (0.1, 0.25),
    codebooks: dict[int, Codebook] | None = None,
) -> list[dict]:
    """Measured length minus the explicit bound terms, in bits."""
    from .tscode import build_codebook

    codebooks = {} if codebooks is None else codebooks
    rows = []
    for n in ns:
        cb = codebooks.get(n) or build_codebook(n)
        for p in ps:
            for eps in epss:
                r = rate_report(n, p, eps, mode="exact", cb=cb)
                rows.append({
                    "n": n, "p": p, "eps": eps, "m": r.m,
                    "length": r.exact_length, "bound_bits": r.bound_bits,
                    "residual_bits": r.residual_bits,
                })
    return rows


# -- Monte Carlo helpers -----------------------------------------------------

def _binomial_draws(m: int, p: float, trials: int, seed: int, shards: int = 4) -> np.ndarray:
    """Binomial(m, p) draws split over shards with spawned child seeds."""
    children = np.random.SeedSequence(seed).spawn(shards)
    sizes = [trials // shards + (s < trials % shards) for s in range(shards)]
    parts = [np.random.default_rng(c).binomial(m, p, size=k) for c, k in zip(children, sizes)]
    return np.concatenate(parts)


def chernoff_delta2(delta1: float, p: float) -> float:
    """Exponent rate from the Chernoff argument: P(j <= (1-d1) m p) <= exp(-m * this)."""
    if not 0.0 < delta1 < 1.0:
        raise DomainError(f"delta1 must lie in (0, 1), got {delta1}")
    return p * (delta1 + (1.0 - delta1) * math.log(1.0 - delta1))


def chernoff_delta2_literal(delta1: float) -> float:
    """The exponent as printed in the source, kept for comparison (it is negative)."""
    if not 0.0 < delta1 < 1.0:
        raise DomainError(f"delta1 must lie in (0, 1), got {delta1}")
    return -delta1 - (1.0 - delta1) * math.log(1.0 - delta1)


def chernoff_check(n: int, p: float, delta1: float, trials: int = 100_000, seed: int = 0, shards: int = 4) -> BoundCheckReport:
    _check_p(p)
    m = num_pairs(n)
    d2 = chernoff_d2 = chernoff_delta2(delta1, p)
    d2_lit = chernoff_delta2_literal(delta1)
    j = _binomial_draws(m, p, trials, seed, shards)
    hits = int(np.count_nonzero(j <= (1.0 - delta1) * m * p))
    freq = hits / trials
    se = math.sqrt(max(freq * (1.0 - freq), 0.0) / trials)
    bound = math.exp(-m * d2)
    return BoundCheckReport(
        "chernoff",
        {"n": n, "m": m, "p": p, "delta1": delta1, "trials": trials, "seed": seed, "shards": shards},
        observed=freq,
        bound=bound + 3.0 * se,
        verdict=_verdict(freq <= bound + 3.0 * se),
        details={
            "tail_count": hits,
            "delta2_corrected": chernoff_d2,
            "delta2_literal": d2_lit,
            "literal_negative": d2_lit < 0,
            "literal_bound": math.exp(-m * d2_lit),
            "discrepancy": "printed delta2 = -d1 - (1-d1)ln(1-d1) is negative on (0,1); "
                           "verdict uses p(d1 + (1-d1)ln(1-d1))",
        },
    )


def _ks_against_normal(z: np.ndarray) -> float:
    """sup_z |F_hat(z) - Phi(z)| for an empirical sample, checked at both sides of each jump."""
    values, counts = np.unique(z, return_counts=True)
    right = np.cumsum(counts) / z.size
    left = right - counts / z.size
    phi = np.array([_STD_NORMAL.cdf(float(v)) for v in values])
    return float(max(np.max(np.abs(right - phi)), np.max(np.abs(left - phi))))


def _standardized_information(j: np.ndarray, m: int, p: float) -> np.ndarray:
    model = BernoulliModel(p)
    if model.V == 0.0:
        raise DomainError("p = 1/2 has zero varentropy; the normalized sum is undefined")
    info = -j * math.log2(p) - (m - j) * math.log2(1.0 - p)
    return (info - m * model.H) / (model.sigma * math.sqrt(m))


def exact_normal_deviation(m: int, p: float) -> float:
    """sup_z |P(S_m <= z) - Phi(z)| computed from the exact binomial law."""
    _check_p(p)
    js = np.arange(m + 1)
    z = _standardized_information(js, m, p)
    logpmf = np.array([
        math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1) + k * math.log(p) + (m - k) * math.log1p(-p)
        for k in range(m + 1)
    ])
    pmf = np.exp(logpmf)
    order = np.argsort(z)
    z, pmf = z[order], pmf[order]
    right = np.cumsum(pmf)
    left = right - pmf
    phi = np.array([_STD_NORMAL.cdf(float(v)) for v in z])
    return float(max(np.max(np.abs(right - phi)), np.max(np.abs(left - phi))))


def berry_esseen_check(
    m_grid: Sequence[int] = (100, 400, 1600, 6400),
    p: float = 0.2,
    trials: int = 100_000,
    seed: int = 0,
    A: float = 1.0,
    shards: int = 4,
) -> BoundCheckReport:
    _check_p(p)
    if p == 0.5:
        raise DomainError("p = 1/2 has zero varentropy; the normalized sum is undefined")
    rows = []
    for idx, m in enumerate(m_grid):
        j = _binomial_draws(m, p, trials, seed + idx, shards)
        d = _ks_against_normal(_standardized_information(j, m, p))
        rows.append({"m": m, "D_m": d, "D_m_sqrt_m": d * math.sqrt(m), "seed": seed + idx})
    worst = max(r["D_m_sqrt_m"] for r in rows)
    return BoundCheckReport(
        "berry",
        {"m_grid": list(m_grid), "p": p, "trials": trials, "seed": seed, "A": A, "shards": shards},
        observed=worst,
        bound=A,
        verdict=_verdict(worst <= A),
        details={"rows": rows},
    )


# -- Wright convergence ------------------------------------------------------

def _half(m: int) -> int:
    return -(-m // 2)


def wright_convergence_report(
    n_list: Sequence[int] = (10, 20, 30),
    j_rule: str | Callable[[int], int] = "half",
    tol: float = 0.05,
) -> BoundCheckReport:
    rule = {"half": _half, "zero": lambda m: 0}.get(j_rule, j_rule) if isinstance(j_rule, str) else j_rule
    if isinstance(rule, str):
        raise DomainError(f"unknown j rule {j_rule!r}")
    rows = []
    for n in n_list:
        m = num_pairs(n)
        j = rule(m)
        ratio = float(wright_ratio(n, j))
        rows.append({
            "n": n, "j": j, "mu": mu(n, j), "ratio": ratio,
            "abs_dev": abs(ratio - 1.0), "regime_ok": mu(n, j) > 0,
        })
    devs = [r["abs_dev"] for r in rows]
    decreasing = all(a > b for a, b in zip(devs, devs[1:]))
    return BoundCheckReport(
        "wright",
        {"n_list": list(n_list), "j_rule": j_rule if isinstance(j_rule, str) else "custom", "tol": tol},
        observed=devs[-1],
        bound=tol,
        verdict=_verdict(decreasing and devs[-1] <= tol),
        details={"rows": rows, "strictly_decreasing": decreasing},
    )


# -- Stirling sweep ----------------------------------------------------------

def stirling_sweep(
    m_dense: int = 200,
    m_grid: Sequence[int] = (500, 1000, 2500, 5000, 10_000),
    random_pairs: int = 10_000,
    m_max: int = 10_000,
    seed: int = 0,
) -> BoundCheckReport:
    """Compare both Stirling bounds with exact log2 C(m, j)."""
    violations = []
    checked = 0
    max_gap = 0.0

    def check(m: int, j: int, exact: float) -> None:
        nonlocal checked, max_gap
        lo, hi = stirling_lower(m, j), stirling_upper(m, j)
        checked += 1
        max_gap = max(max_gap, hi - lo)
        if not lo <= exact <= hi:
            violations.append({"m": m, "j": j, "lower": lo, "exact": exact, "upper": hi})

    for m in list(range(2, m_dense + 1)) + list(m_grid):
        c = 1
        for j in range(1, m):
            c = c * (m - j + 1) // j
            check(m, j, log2_int(c))
    rng = random.Random(seed)
    for _ in range(random_pairs):
        m = rng.randint(2, m_max)
        j = rng.randint(1, m - 1)
        check(m, j, log2_int(gmpy2.comb(m, j)))
    return BoundCheckReport(
        "stirling",
        {"m_dense": m_dense, "m_grid": list(m_grid), "random_pairs": random_pairs, "m_max": m_max, "seed": seed},
        observed=float(len(violations)),
        bound=0.0,
        verdict=_verdict(not violations),
        details={"checked": checked, "max_gap_bits": max_gap, "violations": violations[:20]},
    )


def gamma_overflow_check(
    n: int,
    p: float,
    eps: float,
    trials: int = 100_000,
    seed: int = 0,
    A: float = 0.5,
    delta1: float = 0.5,
    C_U: float = 2.0,
    shards: int = 4,
) -> BoundCheckReport:
    """Empirical P(log2 N(n, j(S)) > m * gamma) against eps."""
    m = num_pairs(n)
    gamma = gamma_threshold(n, p, eps, A, chernoff_delta2(delta1, p), C_U)
    row = count_row(n)
    logs = np.array([log2_int(c) for c in row])
    j = _binomial_draws(m, p, trials, seed, shards)
    freq = float(np.mean(logs[j] > m * gamma))
    se = math.sqrt(eps * (1.0 - eps) / trials)
    return BoundCheckReport(
        "gamma",
        {"n": n, "p": p, "eps": eps, "trials": trials, "seed": seed, "A": A, "delta1": delta1, "C_U": C_U},
        observed=freq,
        bound=eps + 3.0 * se,
        verdict=_verdict(freq <= eps + 3.0 * se),
        details={"gamma": gamma, "m_gamma_bits": m * gamma},
    )
