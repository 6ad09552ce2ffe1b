"""Comparisons between bounds and the numeric checks behind the explicit constants.

Sweeps decide every inequality on the certified side: a claim counts only if
the whole enclosure lies where the claim says.  Vectorised passes screen the
bulk with padded float arithmetic and hand anything close to an
arbitrary-precision recheck.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .bounds import (
    SUITE_NAMES,
    BoundContext,
    BoundReport,
    evaluate_suite,
    log2_improvement,
    log2_kanold_2k,
    log2_kanold_sqrt,
    log2_loglog_closed,
    log2_stevens_published,
)
from .certified import UNIT_ROUNDOFF, CertifiedReal, fraction_bounds
from .errors import CapacityError, DomainError, IndeterminateError
from .exact import factor_tables, g_exact, g_table
from .primes import MAX_SIEVE_LIMIT, PrimeTable, build_prime_table, shared_table
from .radical import Radical
from .tails import _cum_with_error, find_l  # noqa: F401  (find_l is part of this module's API)

U_EXPONENT = Fraction(20, 9)
U_CLOSURE = (1102, 5761308)
LEMMA_RATIO_SLACK = Fraction(148, 100000)
RATIO_LEMMA_MIN_PRIME = 286
SIGMA_CONST = 0.41  # the double just below 41/100, so the check is conservative
Q_L_EXPONENT = Fraction(9, 20)


@dataclass(frozen=True)
class SpecialSumResult:
    """Minimal u with sum_{j=1..u} 1/p_{m+j} > 1 - 1/(2 p_m)."""

    m: int
    p_m: int
    u: int
    ratio: float  # log u / log p_m
    sum_lo: float
    prev_hi: float

    @property
    def exceeds_threshold(self) -> bool:
        """u > p_m^{20/9}, decided exactly as u^9 > p_m^20."""
        return self.u**9 > self.p_m**20


def _threshold(p_m: int) -> tuple[float, float]:
    return fraction_bounds(1 - Fraction(1, 2 * p_m))


def _u_search(m: int, tab: PrimeTable, max_limit: int) -> tuple[SpecialSumResult, PrimeTable]:
    p_m = tab.nth_prime(m)
    t_lo, t_hi = _threshold(p_m)
    while True:
        u_max = tab.count - m
        if u_max <= 0:
            raise CapacityError(f"table ends before p_{m + 1}")
        s, e = tab.tail_sums(m, u_max)
        lo = s - e
        hits = np.flatnonzero(lo > t_hi)
        if hits.size:
            u = int(hits[0])
            prev_hi = float(s[u - 1] + e[u - 1])
            if prev_hi > t_lo:
                raise IndeterminateError(f"sum for u={u - 1} straddles the threshold at m={m}")
            ratio = math.log(u) / math.log(p_m)
            return SpecialSumResult(m, p_m, u, ratio, float(lo[u]), prev_hi), tab
        if tab.limit >= max_limit:
            raise CapacityError(f"sum from p_{m + 1} stays below 1 - 1/(2 p_m) up to {tab.limit}")
        # the partial sums grow like loglog x, so a modest extension usually suffices
        tab = build_prime_table(min(max_limit, tab.limit + tab.limit // 8))


def special_sum_u(m: int, table: PrimeTable | None = None, max_limit: int = MAX_SIEVE_LIMIT) -> SpecialSumResult:
    """Search the table's prefix sums for the minimal u.

    When the sum has not crossed the threshold by the end of the table, a
    larger private table is sieved (in steps of one eighth, up to
    ``max_limit``); the caller's table is left untouched.
    """
    if m < 1:
        raise DomainError("m must be at least 1")
    return _u_search(m, table or shared_table(min_count=m + 1), max_limit)[0]


def verify_lemma_logp(m: int, u: int, table: PrimeTable | None = None) -> bool:
    """log p_{m+u} < log u + (loglog u + m/u)(1 + 1/log u) + m/(u log^2 u) for u > m."""
    if u <= m:
        raise DomainError("the lemma needs u > m")
    tab = table or shared_table(min_count=m + u)
    p = tab.nth_prime(m + u)
    lu = CertifiedReal.coerce(u).log()
    mu = CertifiedReal.from_fraction(Fraction(m, u))
    rhs = lu + (lu.log() + mu) * (1 + 1 / lu) + mu / (lu * lu)
    lhs = CertifiedReal.coerce(p).log()
    if lhs.hi < rhs.lo:
        return True
    if lhs.lo >= rhs.hi:
        return False
    with mpmath.workdps(60):
        lu_ = mpmath.log(u)
        r = lu_ + (mpmath.log(lu_) + mpmath.mpf(m) / u) * (1 + 1 / lu_) + mpmath.mpf(m) / (u * lu_**2)
        return bool(mpmath.log(p) < r)


def verify_lemma_ratio(m: int, table: PrimeTable | None = None) -> bool:
    """log(log p_{m+u} / log p_m) > 1 - 1/(2 p_m) - 0.00148 - 1/(2 log^2 p_{m+u})."""
    res, tab = _u_search(m, table or shared_table(min_count=m + 1), MAX_SIEVE_LIMIT)
    P = tab.nth_prime(m + res.u)
    if P <= RATIO_LEMMA_MIN_PRIME:
        raise DomainError(f"p_(m+u) = {P} is not above {RATIO_LEMMA_MIN_PRIME}")
    lP = CertifiedReal.coerce(P).log()
    lhs = (lP / CertifiedReal.coerce(res.p_m).log()).log()
    rhs = CertifiedReal.from_fraction(1 - Fraction(1, 2 * res.p_m) - LEMMA_RATIO_SLACK) - 1 / (2 * lP * lP)
    if lhs.lo > rhs.hi:
        return True
    if lhs.hi <= rhs.lo:
        return False
    with mpmath.workdps(60):
        lp = mpmath.log(P)
        r = 1 - mpmath.mpf(1) / (2 * res.p_m) - mpmath.mpf("0.00148") - 1 / (2 * lp**2)
        return bool(mpmath.log(lp / mpmath.log(res.p_m)) > r)


def u_closure_holds() -> bool:
    """1102 < 5761308^{9/20}, i.e. 1102^20 < 5761308^9."""
    a, b = U_CLOSURE
    return a**20 < b**9


@dataclass
class UThresholdReport:
    results: list[SpecialSumResult]
    closure_ok: bool
    table: PrimeTable | None = field(default=None, repr=False)  # covers every p_(m+u) found

    @property
    def failures(self) -> list[int]:
        return [r.m for r in self.results if not r.exceeds_threshold]

    @property
    def passed(self) -> bool:
        return self.closure_ok and not self.failures


def verify_u_threshold(m_range: Iterable[int], table: PrimeTable | None = None) -> UThresholdReport:
    """special_sum_u over ``m_range`` with u > p_m^{20/9} checked exactly for each m."""
    m_values = list(m_range)
    tab = table or shared_table(min_count=max(m_values, default=1) + 1)
    results = []
    for m in m_values:
        res, tab = _u_search(m, tab, MAX_SIEVE_LIMIT)  # keep any extension for the next m
        results.append(res)
    return UThresholdReport(results, u_closure_holds(), tab)


# ---------------------------------------------------------------------------
# Mertens-type sweeps over primorials


def _loglog_lo(p: np.ndarray) -> np.ndarray:
    ll = np.log(np.log(p))
    return ll - 8 * UNIT_ROUNDOFF * (1 + np.abs(ll))


def _mp_sigma_check(table: PrimeTable, k: int) -> bool:
    # the float prefix is accurate to ~1e-15; recheck with an exact sum only when short
    p = int(table.primes[k - 1])
    if k <= 5000:
        s = sum(Fraction(1, int(q)) for q in table.primes[:k])
        with mpmath.workdps(60):
            return bool(mpmath.mpf(s.numerator) / s.denominator < mpmath.mpf(41) / 100 + mpmath.log(mpmath.log(p)))
    raise IndeterminateError(f"sigma sweep cannot decide at p_k = {p}")


@dataclass
class SweepResult:
    checked: int
    failures: list[int] = field(default_factory=list)  # offending p_k

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


def verify_sigma_upper(limit: int, table: PrimeTable | None = None) -> SweepResult:
    """sigma^{-1}(P_k) < 0.41 + loglog p_k for every 7 < p_k < limit."""
    tab = table or shared_table(min_limit=limit)
    if limit > tab.limit + 1:
        raise CapacityError(f"limit {limit} exceeds the table limit {tab.limit}")
    k_hi = tab.pi(limit - 1)
    ks = np.arange(5, k_hi + 1)  # p_5 = 11 is the first prime above 7
    p = tab.primes[ks - 1].astype(np.float64)
    lhs = tab.recip_sum[ks] + tab.recip_err[ks]
    rhs = (SIGMA_CONST + _loglog_lo(p)) * (1 - 4 * UNIT_ROUNDOFF)
    close = np.flatnonzero(lhs >= rhs)
    failures = [int(tab.primes[ks[i] - 1]) for i in close if not _mp_sigma_check(tab, int(ks[i]))]
    return SweepResult(int(ks.size), failures)


def verify_pi_lower(limit: int, table: PrimeTable | None = None) -> SweepResult:
    """pi^{-1}(P_k) > 1/(3 log p_k) for every p_k < limit, compared in log form."""
    tab = table or shared_table(min_limit=limit)
    if limit > tab.limit + 1:
        raise CapacityError(f"limit {limit} exceeds the table limit {tab.limit}")
    k_hi = tab.pi(limit - 1)
    p = tab.primes[:k_hi].astype(np.float64)
    r = 1.0 / p
    terms = -np.log1p(-r)
    nlp, nlp_err = _cum_with_error(terms, 4 * UNIT_ROUNDOFF * (terms + r))
    lhs = nlp[1:] + nlp_err[1:]  # upper end of -log pi^{-1}(P_k)
    log3_lo = math.log(3) * (1 - 4 * UNIT_ROUNDOFF)
    rhs = (log3_lo + _loglog_lo(p)) * (1 - 4 * UNIT_ROUNDOFF)
    close = np.flatnonzero(lhs >= rhs)
    failures = []
    for i in close:
        k = int(i) + 1
        prod = math.prod(int(q) - 1 for q in tab.primes[:k])
        n = math.prod(int(q) for q in tab.primes[:k])
        with mpmath.workdps(60):
            if not mpmath.mpf(prod) / n > 1 / (3 * mpmath.log(int(tab.primes[k - 1]))):
                failures.append(int(tab.primes[k - 1]))
    return SweepResult(int(k_hi), failures)


@dataclass(frozen=True)
class QlCheck:
    k: int
    l: int
    q_l: int
    q_l_minus_1: int | None
    holds: bool  # q_{l-1} < k^{0.45} (vacuous when l = 1)


def q_l_samples(k_samples: Sequence[int], table: PrimeTable | None = None) -> list[QlCheck]:
    from .bounds import IMPROVEMENT_K_MIN

    out = []
    for k in k_samples:
        if k < IMPROVEMENT_K_MIN:
            raise DomainError(f"the q_l estimate is stated for k >= {IMPROVEMENT_K_MIN}")
        tab = table or shared_table(min_count=k)
        rad = Radical.primorial(k, tab)
        l, ql = find_l(rad)
        prev = rad.primes[l - 2] if l >= 2 else None
        # q < k^{9/20}  <=>  q^20 < k^9
        holds = prev is None or prev**20 < k**9
        out.append(QlCheck(k, l, ql, prev, holds))
    return out


def verify_q_l_bound(k_samples: Sequence[int], table: PrimeTable | None = None) -> bool:
    """q_{l-1} < k^{0.45} on P_k for each sampled k (q_l is reported by :func:`q_l_samples`)."""
    return all(c.holds for c in q_l_samples(k_samples, table))


# ---------------------------------------------------------------------------
# crossovers


@dataclass(frozen=True)
class CrossoverResult:
    bound_a: str
    bound_b: str
    k_star: int | None
    checked_range: tuple[int, int]
    holds_at: dict = field(default_factory=dict)  # k -> a < b, certified


CROSSOVER_PAD = 3 * UNIT_ROUNDOFF


def log2_enclosure(name: str, ks: Sequence[int], table: PrimeTable | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper ends of log2 of a bound evaluated on k (or on P_k)."""
    k = np.asarray(ks, dtype=np.int64)
    if name == "kanold_2k":
        v = log2_kanold_2k(k)
        return v, v
    if name == "improvement":
        hi = np.empty(k.size)
        tab = table or shared_table(min_count=int(k.max()))
        for i, kk in enumerate(k.tolist()):
            l, ql = find_l(Radical.primorial(kk, tab))
            hi[i] = log2_improvement(kk, l, ql)
        lo = hi - 4 * 2.0**-40 * np.abs(hi) - 1e-9
        return lo, hi
    funcs = {
        "kanold_sqrt": log2_kanold_sqrt,
        "stevens_published": log2_stevens_published,
        "loglog_closed": log2_loglog_closed,
    }
    if name not in funcs:
        raise DomainError(f"no k-only log2 form for {name!r}")
    v = funcs[name](k)
    pad = 2.0**-40 * np.abs(v) + 2.0**-60
    return v - pad, v + pad


def crossover(bound_a: str, bound_b: str, k_range: Sequence[int], table: PrimeTable | None = None) -> CrossoverResult:
    """First k of the range from which a < b holds through the range's end.

    ``k_star`` is None when a < b fails at the last k.  The comparison is made
    on the adverse ends (upper end of a, lower end of b) padded by 3 ulps.
    """
    ks = np.asarray(list(k_range), dtype=np.int64)
    if ks.size == 0:
        raise DomainError("empty k range")
    _, a_hi = log2_enclosure(bound_a, ks, table)
    b_lo, _ = log2_enclosure(bound_b, ks, table)
    less = (a_hi * (1 + CROSSOVER_PAD)) < (b_lo * (1 - CROSSOVER_PAD))
    if not less[-1]:
        k_star = None
    else:
        fails = np.flatnonzero(~less)
        k_star = int(ks[fails[-1] + 1]) if fails.size else int(ks[0])
    holds = {int(k): bool(v) for k, v in zip(ks[:64], less[:64])} if ks.size <= 64 else {}
    return CrossoverResult(bound_a, bound_b, k_star, (int(ks[0]), int(ks[-1])), holds)


# ---------------------------------------------------------------------------
# tables of bound reports

CSV_COLUMNS = ("input", "name", "applicable", "reason", "value_kind", "value", "params_json")


def _input_label(item) -> str:
    if isinstance(item, Radical):
        return str(item) if item.k <= 8 else ",".join(map(str, item.primes))
    return f"P{item}"


def _resolve(item, table: PrimeTable | None) -> Radical:
    if isinstance(item, Radical):
        return item
    return Radical.primorial(int(item), table)


def bound_table(
    inputs: Sequence[int | Radical],
    which: Sequence[str] | None = None,
    ctx: BoundContext | None = None,
) -> list[tuple[str, BoundReport]]:
    """One (input label, report) row per input and bound, in input order.

    Integers stand for the primorial P_k.  With ``ctx.threads > 1`` the inputs
    are evaluated concurrently; the output order never changes.
    """
    ctx = ctx or BoundContext()
    names = list(SUITE_NAMES) + ["exact"] if which is None else list(which)

    def one(item):
        rad = _resolve(item, ctx.table)
        return [(_input_label(item), r) for r in evaluate_suite(rad, names, ctx)]

    if ctx.threads > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=ctx.threads) as pool:
            chunks = list(pool.map(one, inputs))
    else:
        chunks = [one(item) for item in inputs]
    return [row for chunk in chunks for row in chunk]


def _value_cells(rep: BoundReport) -> tuple[str, str]:
    v = rep.value
    if v is None:
        return "", ""
    if v.kind == "Exact":
        return "Exact", str(v.exact)
    return "Log2", repr(v.log2)


def _params_with_advisory(rep: BoundReport) -> dict:
    params = dict(rep.params)
    if rep.advisory is not None:
        params["advisory"] = rep.advisory.to_dict()
    if rep.target != "g":
        params["target"] = rep.target
    return params


def table_to_csv(rows: list[tuple[str, BoundReport]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for label, rep in rows:
        kind, value = _value_cells(rep)
        params = json.dumps(_params_with_advisory(rep), sort_keys=True, separators=(",", ":"))
        w.writerow([label, rep.name, "true" if rep.applicable else "false", rep.reason, kind, value, params])
    return buf.getvalue()


def table_to_json(rows: list[tuple[str, BoundReport]]) -> str:
    out = []
    for label, rep in rows:
        d = rep.to_dict()
        d["input"] = label
        out.append(d)
    return json.dumps(out, sort_keys=True, indent=1)


# ---------------------------------------------------------------------------
# check suites used by ``jacobsthal verify``


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


APPENDIX_DEFAULT_LIMIT = 10**7
APPENDIX_FULL_LIMIT = 10**8
APPENDIX_FULL_SIEVE = 101_000_000
LONG_SUM_M, LONG_SUM_U = 148, 5_761_308


def short_appendix_sum(table: PrimeTable | None = None) -> CertifiedReal:
    """sum_{4<=j<=29} 1/p_j."""
    tab = table or shared_table(min_count=29)
    return tab.prefix_recip_sum(3, 26)


def long_appendix_sum(table: PrimeTable | None = None) -> CertifiedReal:
    """sum_{j=1..5761308} 1/p_{148+j}; needs primes up to about 1.01e8."""
    tab = table or shared_table(min_limit=APPENDIX_FULL_SIEVE)
    return tab.prefix_recip_sum(LONG_SUM_M, LONG_SUM_U)


def appendix_checks(full: bool = False) -> list[Check]:
    """The Appendix computations at desk scale, or at full scale with ``full``."""
    limit = APPENDIX_FULL_LIMIT if full else APPENDIX_DEFAULT_LIMIT
    m_hi = 148 if full else 60
    tab = shared_table(min_limit=APPENDIX_FULL_SIEVE if full else limit)
    out = []
    short = short_appendix_sum(tab)
    out.append(Check("sum 1/p_j for 4<=j<=29 below 0.9", short.hi < 0.9, f"upper end {short.hi!r}"))
    if full:
        long = long_appendix_sum(tab)
        thr = 1 - Fraction(1, 2 * 857)
        ok = long.lo > fraction_bounds(thr)[1]
        out.append(Check("sum of 5761308 reciprocals after p_148 exceeds 1 - 1/1714", ok, f"enclosure [{long.lo!r}, {long.hi!r}]"))
    rep = verify_u_threshold(range(20, m_hi + 1), tab)
    worst = min(rep.results, key=lambda r: r.ratio)
    out.append(
        Check(
            f"u > p_m^(20/9) for m=20..{m_hi}",
            not rep.failures,
            f"failures {rep.failures}; smallest ratio {worst.ratio:.4f} at m={worst.m}",
        )
    )
    out.append(Check("1102 < 5761308^(9/20)", rep.closure_ok))
    bad_logp = [r.m for r in rep.results if not verify_lemma_logp(r.m, r.u, rep.table)]
    out.append(Check(f"log p_(m+u) lemma at m=20..{m_hi}", not bad_logp, f"failures {bad_logp}"))
    bad_ratio = [r.m for r in rep.results if not verify_lemma_ratio(r.m, rep.table)]
    out.append(Check(f"log-ratio lemma at m=20..{m_hi}", not bad_ratio, f"failures {bad_ratio}"))
    sig = verify_sigma_upper(limit, tab)
    out.append(Check(f"sigma(P_k) < 0.41 + loglog p_k for 7 < p_k < {limit:.0e}", sig.passed, f"{sig.checked} primorials; failures {sig.failures[:5]}"))
    pil = verify_pi_lower(limit, tab)
    out.append(Check(f"pi(P_k) > 1/(3 log p_k) for p_k < {limit:.0e}", pil.passed, f"{pil.checked} primorials; failures {pil.failures[:5]}"))
    qs = q_l_samples([13360, 20000, 50000], tab)
    detail = "; ".join(f"k={c.k}: q_(l-1)={c.q_l_minus_1}, q_l={c.q_l}" for c in qs)
    out.append(Check("q_(l-1) < k^0.45 on sampled P_k", all(c.holds for c in qs), detail))
    return out


def crossover_checks(table: PrimeTable | None = None) -> list[Check]:
    out = []
    c = crossover("stevens_published", "kanold_2k", range(2, 10**4 + 1), table)
    out.append(Check("stevens_published < 2^k for all 300 < k <= 1e4", c.k_star is not None and c.k_star <= 301, f"k* = {c.k_star}"))
    at_5m = crossover("stevens_published", "kanold_sqrt", [5 * 10**6], table).k_star is not None
    at_1m = crossover("kanold_sqrt", "stevens_published", [10**6], table).k_star is not None
    out.append(Check("stevens_published < 2^sqrt(k) at k=5e6 and > at k=1e6", at_5m and at_1m))
    imp = {k: crossover("improvement", "kanold_sqrt", [k], table).k_star is not None for k in (10**4, 60000, 10**5)}
    ok = imp[60000] and imp[10**5] and not imp[10**4]
    out.append(Check("improvement(P_k) < 2^sqrt(k) at k=6e4, 1e5 and not at 1e4", ok, str(imp)))
    return out


@dataclass
class SoundnessResult:
    checked: int
    evaluations: int
    violations: list[tuple[int, str]]

    @property
    def passed(self) -> bool:
        return not self.violations


def _radical_from_spf(n: int, spf: np.ndarray) -> Radical:
    ps = []
    while n > 1:
        p = int(spf[n])
        ps.append(p)
        n //= p
    return Radical.trusted(ps)


def soundness_sweep(limit: int, primorial_k: int = 9, threads: int = 1) -> SoundnessResult:
    """Every applicable bound against exact g for all squarefree n <= limit and P_1..P_k."""
    g = g_table(limit)
    spf, _, sqf = factor_tables(limit)

    def oracle(rad: Radical):
        return int(g[rad.n]) if rad.n <= limit else None

    ctx = BoundContext(exact_budget=0, observation_budget=0, g_oracle=oracle, threads=threads)
    checked = evals = 0
    violations = []
    for n in np.flatnonzero(sqf[2:]).tolist():
        n += 2
        rad = _radical_from_spf(n, spf)
        truth = int(g[n])
        for rep in evaluate_suite(rad, SUITE_NAMES, ctx):
            if rep.applicable:
                evals += 1
                if not rep.g_value().at_least(truth):
                    violations.append((n, rep.name))
        checked += 1
    big = BoundContext(exact_budget=10**10, threads=threads)
    for k in range(1, primorial_k + 1):
        rad = Radical.primorial(k)
        truth = g_exact(rad, threads=threads).g
        for rep in evaluate_suite(rad, SUITE_NAMES, big):
            if rep.applicable:
                evals += 1
                if not rep.g_value().at_least(truth):
                    violations.append((rad.n, rep.name))
        checked += 1
    return SoundnessResult(checked, evals, violations)
