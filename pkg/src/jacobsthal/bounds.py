"""Explicit upper bounds on Jacobsthal's function, evaluated with outward rounding.

Every bound returns a :class:`BoundReport`.  Values never under-report: real
quantities are rounded up, preconditions are checked against the adverse end
of each enclosure (upper end of sigma^{-1}, lower end of pi^{-1}), and integer
results are ceilings.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .certified import (
    CertifiedReal,
    down,
    fraction_log2_bounds,
    int_log2_bounds,
    up,
)
from .errors import CapacityError, DomainError
from .exact import g_exact
from .primes import PrimeTable, shared_table
from .radical import Radical, pi_inv, sigma_inv
from .tails import find_l, tail_sums

EXACT_LOG2_LIMIT = 256
IMPROVEMENT_K_MIN = math.ceil(math.exp(9.5))  # 13360
KANOLD_SQRT_K_MIN = math.exp(50)
KANOLD_SQRT_ADDENDUM_K = math.exp(6)
E = CertifiedReal(math.e, up(math.e))  # math.e < e
PI = CertifiedReal(math.pi, up(math.pi))  # math.pi < pi
LOG2_PAD = 2.0 ** -40
OBSERVATION_MAX_SPLIT = 12


@dataclass(frozen=True)
class BoundValue:
    """An upper bound stored exactly below 2^256 and as a rounded-up log2 above.

    ``approx`` keeps the outward-rounded real value a ceiling was taken from.
    """

    kind: str
    exact: int | None = None
    log2: float | None = None
    approx: float | None = None

    @classmethod
    def from_int(cls, n: int, approx: float | None = None) -> "BoundValue":
        if n.bit_length() <= EXACT_LOG2_LIMIT:
            return cls("Exact", exact=int(n), approx=approx)
        return cls("Log2", log2=int_log2_bounds(n)[1])

    @classmethod
    def from_fraction(cls, q: Fraction) -> "BoundValue":
        """Ceiling of a rational upper bound."""
        c = -((-q.numerator) // q.denominator)
        if c.bit_length() <= EXACT_LOG2_LIMIT:
            hi = float(q)
            approx = hi if Fraction(hi) >= q else up(hi)
            return cls("Exact", exact=c, approx=approx)
        return cls("Log2", log2=fraction_log2_bounds(q)[1])

    @classmethod
    def from_float(cls, x: float) -> "BoundValue":
        """``x`` is already an upper bound."""
        return cls.from_fraction(Fraction(x))

    @classmethod
    def from_log2(cls, l2: float) -> "BoundValue":
        """Bound whose base-2 logarithm is at most ``l2``."""
        if l2 < EXACT_LOG2_LIMIT:
            v = up(2.0**l2, 2)
            return cls("Exact", exact=math.ceil(v), approx=v)
        return cls("Log2", log2=l2)

    def log2_bounds(self) -> tuple[float, float]:
        if self.kind == "Exact":
            if self.exact <= 0:
                return -math.inf, -math.inf
            return int_log2_bounds(self.exact)
        return self.log2, self.log2

    def sort_key(self):
        # Log2 values are all >= 2^256 > every Exact value
        return (1, self.log2) if self.kind == "Log2" else (0, self.exact)

    def at_least(self, g: int) -> bool:
        return self.kind == "Log2" or self.exact >= g

    def plus(self, c: int) -> "BoundValue":
        if self.kind == "Exact":
            return BoundValue.from_int(self.exact + c)
        return BoundValue("Log2", log2=up(self.log2 + 2.0 ** -200) if c > 0 else self.log2)

    def render(self) -> str:
        if self.kind == "Exact":
            return str(self.exact)
        # one decimal, rounded up unless the excess is below display noise
        return f"2^{{{math.ceil(self.log2 * 10 - 1e-6) / 10:.1f}}}"

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "Exact":
            d["exact"] = self.exact
            if self.approx is not None:
                d["approx"] = self.approx
        else:
            d["log2"] = self.log2
        return d


@dataclass
class BoundReport:
    name: str
    applicable: bool
    reason: str = ""
    value: BoundValue | None = None
    params: dict = field(default_factory=dict)
    target: str = "g"
    advisory: BoundValue | None = None

    def g_value(self) -> BoundValue | None:
        """The value as a bound on g (L-bounds shifted by one)."""
        if self.value is None:
            return None
        return self.value.plus(1) if self.target == "L" else self.value

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "applicable": self.applicable,
            "reason": self.reason,
            "value": self.value.to_dict() if self.value else None,
            "params": self.params,
            "target": self.target,
        }
        if self.advisory is not None:
            d["advisory"] = self.advisory.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _na(name: str, reason: str, target: str = "g", **params) -> BoundReport:
    return BoundReport(name, False, reason, None, params, target)


@dataclass
class BoundContext:
    """Shared evaluation settings.

    ``exact_budget`` caps the scan behind the "exact" row.  ``g_oracle`` may
    supply exact g values (e.g. from a precomputed table) for the sub-radicals
    the Observation needs; otherwise they are scanned when
    ``n <= observation_budget`` and bounded by the rest of the suite when larger.
    """

    table: PrimeTable | None = None
    exact_budget: int = 10**7
    observation_budget: int = 10**8
    threads: int = 1
    g_oracle: Callable[[Radical], int | None] | None = None


def binom_sum(k: int, s: int) -> int:
    """sum_{i=1..min(s,k)} C(k, i)."""
    if s >= k:
        return 2**k - 1
    total, c = 0, 1
    for i in range(1, s + 1):
        c = c * (k - i + 1) // i
        total += c
    return total


def _smallest_odd_s(threshold_hi: float | Fraction) -> int:
    """Smallest odd s >= 1 with s + 1 >= threshold."""
    s1 = max(2, math.ceil(threshold_hi))
    if s1 % 2:
        s1 += 1
    return s1 - 1


# ---------------------------------------------------------------------------
# bounds depending on k only


def _log2_padded(x: float) -> float:
    return up(x + abs(x) * LOG2_PAD + 2.0 ** -60)


def log2_stevens_published(k):
    """log2 of 2 k^{2 + 2e ln k} (midpoint, vectorised)."""
    k = np.asarray(k, dtype=np.float64)
    return 1.0 + (2.0 + 2.0 * math.e * np.log(k)) * np.log2(k)


def log2_loglog_closed(k):
    k = np.asarray(k, dtype=np.float64)
    return (3.0 + 3.81 * np.log(np.log(k))) * np.log2(k)


def log2_kanold_sqrt(k):
    return np.sqrt(np.asarray(k, dtype=np.float64))


def log2_kanold_2k(k):
    return np.asarray(k, dtype=np.float64)


def _need_k(name: str, k: int, kmin: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < kmin:
        raise DomainError(f"{name} needs an integer k >= {kmin}, got {k}")


def bound_jacobsthal_original(k: int) -> BoundReport:
    _need_k("jacobsthal_original", k, 1)
    return BoundReport("jacobsthal_original", True, "", BoundValue.from_int(k * 2**k + 2**k - k), {"k": k})


def bound_jacobsthal_L(k: int) -> BoundReport:
    _need_k("jacobsthal_L", k, 1)
    return BoundReport("jacobsthal_L", True, "", BoundValue.from_int((k + 1) * (2**k - 1)), {"k": k}, target="L")


def bound_kanold_2k(k: int) -> BoundReport:
    _need_k("kanold_2k", k, 1)
    return BoundReport("kanold_2k", True, "", BoundValue.from_int(2**k), {"k": k})


def bound_kanold_sqrt(k: int) -> BoundReport:
    _need_k("kanold_sqrt", k, 1)
    r = math.isqrt(k)
    if r * r == k:
        value = BoundValue.from_int(2**r)
    else:
        value = BoundValue.from_log2(up(math.sqrt(k)))
    params = {"k": k, "proved_k_min": "e^50", "claimed_k_gt_e6": bool(k > KANOLD_SQRT_ADDENDUM_K)}
    if k >= KANOLD_SQRT_K_MIN:
        return BoundReport("kanold_sqrt", True, "", value, params)
    rep = _na("kanold_sqrt", "proved only for k >= e^50", **params)
    rep.advisory = value
    return rep


def bound_stevens_published(k: int) -> BoundReport:
    _need_k("stevens_published", k, 2)
    l2 = _log2_padded(float(log2_stevens_published(k)))
    return BoundReport("stevens_published", True, "", BoundValue.from_log2(l2), {"k": k, "log": "natural"})


def bound_loglog_closed(k: int) -> BoundReport:
    _need_k("loglog_closed", k, 3)
    l2 = _log2_padded(float(log2_loglog_closed(k)))
    return BoundReport("loglog_closed", True, "", BoundValue.from_log2(l2), {"k": k})


# ---------------------------------------------------------------------------
# bounds depending on the radical


def bound_westzynthius_sieve(rad: Radical) -> BoundReport:
    """2^k / pi^{-1}(n)."""
    pi = pi_inv(rad)
    if pi.exact is not None:
        value = BoundValue.from_fraction(Fraction(2**rad.k) / pi.exact)
    else:
        value = BoundValue.from_log2(_log2_padded(rad.k - math.log2(pi.lo)))
    return BoundReport("westzynthius_sieve", True, "", value, {"k": rad.k})


def bound_kanold_p(rad: Radical, r: float | None = None) -> BoundReport:
    """ceil(k / r) whenever r + sigma^{-1}(n) < 1."""
    sig = sigma_inv(rad)
    if r is None:
        if sig.hi >= 1.0 and (sig.exact is None or sig.exact >= 1):
            return _na("kanold_p", "sigma^{-1}(n) >= 1", sigma_hi=sig.hi)
        r = down(1.0 - sig.hi)
        if sig.exact is not None:
            r = float(1 - sig.exact)
            if Fraction(r) >= 1 - sig.exact:
                r = down(r)
        if r <= 0.0:
            return _na("kanold_p", "1 - sigma^{-1}(n) is not certifiably positive", sigma_hi=sig.hi)
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    rq = Fraction(r)
    ok = (rq + sig.exact < 1) if sig.exact is not None else up(r + sig.hi) < 1.0
    if not ok:
        return _na("kanold_p", "r + sigma^{-1}(n) < 1 fails", r=r, sigma_hi=sig.hi)
    return BoundReport("kanold_p", True, "", BoundValue.from_fraction(rad.k / rq), {"r": r, "sigma_hi": sig.hi})


def bound_variation(rad: Radical) -> BoundReport:
    k, q1 = rad.k, rad.q1
    if k < 2:
        return _na("variation", "needs k > 1")
    sig = sigma_inv(rad)
    limit = 1 + Fraction(1, 2 * q1)
    ok = sig.exact < limit if sig.exact is not None else sig.certainly_lt(limit)
    if not ok:
        return _na("variation", "sigma^{-1}(n) >= 1 + 1/(2 q_1)", sigma_hi=sig.hi)
    ratio = Fraction(q1, q1 - 1)
    sig_lo = sig.exact if sig.exact is not None else Fraction(sig.lo)
    L_bound = 2 * q1 * (2 * k - 1 - sig_lo) * ratio
    g_bound = 4 * k * q1 * ratio
    return BoundReport(
        "variation",
        True,
        "",
        BoundValue.from_fraction(g_bound),
        {"q1": q1, "L_bound": BoundValue.from_fraction(L_bound).to_dict()},
    )


def _g_of(part: Radical, ctx: BoundContext) -> tuple[BoundValue, str]:
    if ctx.g_oracle is not None:
        g = ctx.g_oracle(part)
        if g is not None:
            return BoundValue.from_int(int(g)), "exact"
    if part.n <= ctx.observation_budget:
        return BoundValue.from_int(g_exact(part, threads=ctx.threads).g), "exact"
    best = best_bound(part, ctx=ctx, include_observation=False, include_exact=False)
    return best.g_value(), f"bound:{best.name}"


def observation_formula(g_d: int, g_f: int, f: int) -> int:
    """g(d) f - f + g(f): the bound on g(fd) for coprime f and d."""
    return g_d * f - f + g_f


def _observation_value(gd: BoundValue, gf: BoundValue, f: int) -> BoundValue:
    if gd.kind == "Exact" and gf.kind == "Exact":
        return BoundValue.from_int(observation_formula(gd.exact, gf.exact, f))
    # g(d) f - f + g(f) < g(d) f + g(f) <= 2 max(g(d) f, g(f))
    a = gd.log2_bounds()[1] + int_log2_bounds(f)[1]
    b = gf.log2_bounds()[1]
    return BoundValue.from_log2(up(max(a, b) + 1.0))


def bound_observation(rad: Radical, split_m: int | None = None, ctx: BoundContext | None = None) -> BoundReport:
    """g(fd) <= g(d) f - f + g(f) with f the product of the ``split_m`` smallest primes."""
    ctx = ctx or BoundContext()
    k = rad.k
    if split_m is None:
        if k < 2:
            return _na("observation", "needs k >= 2")
        # f = q_1...q_m grows so fast that splits past OBSERVATION_MAX_SPLIT never win
        reports = [bound_observation(rad, m, ctx) for m in range(1, min(k, OBSERVATION_MAX_SPLIT + 1))]
        return min(reports, key=lambda r: (r.value.sort_key(), r.params["split_m"]))
    if not 1 <= split_m < k:
        raise DomainError(f"split_m must satisfy 1 <= split_m < k={k}")
    f_rad, d_rad = rad.sub(0, split_m), rad.sub(split_m)
    gf, src_f = _g_of(f_rad, ctx)
    gd, src_d = _g_of(d_rad, ctx)
    value = _observation_value(gd, gf, f_rad.n)
    params = {"split_m": split_m, "f": f_rad.n if f_rad.k <= 64 else None, "g_f_source": src_f, "g_d_source": src_d}
    return BoundReport("observation", True, "", value, params)


def log2_improvement(k: int, l: int, ql: int) -> float:
    """Upper end of log2 of 2^{1.5 k^0.45} 4 (k-l+1) q_l^2 / (q_l - 1)."""
    poly = Fraction(4 * (k - l + 1) * ql * ql, ql - 1)
    mid = 1.5 * k**0.45
    return up(mid + abs(mid) * LOG2_PAD + fraction_log2_bounds(poly)[1])


def bound_improvement(rad: Radical) -> BoundReport:
    k = rad.k
    l, ql = find_l(rad)
    value = BoundValue.from_log2(log2_improvement(k, l, ql))
    params = {"l": l, "q_l": ql, "k_min": IMPROVEMENT_K_MIN}
    if k < IMPROVEMENT_K_MIN:
        rep = _na("improvement", f"certified only for k >= {IMPROVEMENT_K_MIN} (e^9.5)", **params)
        rep.advisory = value
        return rep
    return BoundReport("improvement", True, "", value, params)


def bound_stevens_refined(rad: Radical, table: PrimeTable | None = None) -> BoundReport:
    """(4 log p_k) sum_{i<=s} C(k, i) with s + 1 even and >= 2e(loglog p_k + 1/2).

    For radicals other than P_k the largest prime q_k stands in for p_k,
    which only enlarges the bound.
    """
    k = rad.k
    if k <= 4:
        return _na("stevens_refined", "needs k > 4")
    table = table or shared_table(min_count=k)
    pk = rad.qk
    substituted = not rad.is_initial_segment(table)
    logp = CertifiedReal.coerce(pk).log()
    h = logp.log() + Fraction(1, 2)
    s = _smallest_odd_s((2 * E * h).hi)
    sb = binom_sum(k, s)
    value = BoundValue.from_fraction(Fraction(up((4 * logp).hi)) * sb)
    closed = up(math.log2((4 * logp).hi) + ((1 + 2 * E * (h)).hi) * int_log2_bounds(k)[1])
    params = {"s": s, "h": h.hi, "p_k": pk, "p_k_substituted": substituted, "closed_form_log2": closed}
    return BoundReport("stevens_refined", True, "", value, params)


def _sigma_pi_s(sig: CertifiedReal, K: float) -> int:
    if sig.exact is not None:
        return _smallest_odd_s(Fraction(K) * sig.exact)
    return _smallest_odd_s(up(K * sig.hi))


def bound_sigma_pi(rad: Radical, K: float = 4.0) -> BoundReport:
    """sum_{i<=s} C(k,i) / (pi^{-1} - sigma^{-1 s+1}/(s+1)!), s smallest odd with s+1 >= K sigma^{-1}."""
    k = rad.k
    if k <= 2:
        return _na("sigma_pi", "needs k > 2", K=K)
    sig, pi = sigma_inv(rad), pi_inv(rad)
    if K < 3.9:
        if not (K >= 3.81 and sig.certainly_gt(1)):
            return _na("sigma_pi", "K < 3.9 needs sigma^{-1}(n) > 1 and K >= 3.81", K=K)
    s = _sigma_pi_s(sig, K)
    sb = binom_sum(k, s)
    fact = math.factorial(s + 1)
    if sig.exact is not None and pi.exact is not None:
        denom = pi.exact - sig.exact ** (s + 1) / fact
        if denom <= 0:
            return _na("sigma_pi", "denominator not positive", K=K, s=s)
        value = BoundValue.from_fraction(sb / denom)
        denom_lo = float(denom)
    else:
        denom_c = pi - (sig ** (s + 1)) / fact
        if denom_c.lo <= 0:
            return _na("sigma_pi", "denominator enclosure not strictly positive", K=K, s=s)
        denom_lo = denom_c.lo
        value = BoundValue.from_fraction(sb / Fraction(denom_lo))
    return BoundReport("sigma_pi", True, "", value, {"s": s, "K": K, "numerator": sb, "denominator_lo": denom_lo})


def bound_sigma_pi_corollary(rad: Radical) -> BoundReport:
    """(s+1)! sum_{0<=2j<s} C(k+1, s-2j) / ((sqrt(2 pi (s+1)) - 1) sigma^{-1 s+1})."""
    k = rad.k
    if k <= 2:
        return _na("sigma_pi_corollary", "needs k > 2")
    sig = sigma_inv(rad)
    s = _sigma_pi_s(sig, 4.0)
    num = math.factorial(s + 1) * sum(math.comb(k + 1, s - 2 * j) for j in range((s + 1) // 2))
    stirling = (2 * PI * (s + 1)).sqrt() - 1
    sig_pow = sig ** (s + 1)
    den_lo = (stirling * sig_pow).lo
    if den_lo <= 0:
        return _na("sigma_pi_corollary", "denominator enclosure not strictly positive", s=s)
    value = BoundValue.from_fraction(num / Fraction(den_lo))
    return BoundReport("sigma_pi_corollary", True, "", value, {"s": s, "numerator": num, "denominator_lo": den_lo})


def _addendum_at(rad: Radical, m: int) -> tuple[BoundValue | None, dict]:
    t_sums = tail_sums(rad)
    k = rad.k
    sig_rest = t_sums.sigma_suffix(m)
    pi_d = t_sums.pi_prefix(m)
    if t_sums.exact_sig is not None:
        t = 1 - t_sums.exact_sig[m]
        params = {"m": m, "t": float(t), "pi_d": float(t_sums.exact_pi[m])}
        if t <= 0:
            return None, params
        pd = t_sums.exact_pi[m]
        return BoundValue.from_fraction((k - m + 1) * (2**m + pd) / (pd * t)), params
    t = 1 - sig_rest
    params = {"m": m, "t": t.lo, "pi_d": pi_d.lo}
    if t.lo <= 0:
        return None, params
    num = (CertifiedReal.from_fraction(2**m) + pi_d) * (k - m + 1)
    den = pi_d * t
    l2 = _log2_padded(math.log2(num.hi) - math.log2(den.lo))
    return BoundValue.from_log2(l2), params


def bound_addendum(rad: Radical, m: int | None = None) -> BoundReport:
    """(k-m+1)(2^m + pi(d)) / (pi(d)(1 - sigma(n/d))), d the m smallest primes."""
    k = rad.k
    if m is not None:
        if not 1 <= m < k:
            raise DomainError(f"m must satisfy 1 <= m < k={k}")
        value, params = _addendum_at(rad, m)
        if value is None:
            return _na("addendum", "t = 1 - sigma^{-1}(n/d) is not positive", **params)
        return BoundReport("addendum", True, "", value, params)
    if k < 2:
        return _na("addendum", "needs k >= 2")
    candidates = range(1, k)
    t = tail_sums(rad)
    if t.exact_sig is None:
        # rank every m on midpoints, then certify the best few
        mm = np.arange(1, k)
        tt = 1.0 - t.sig_mid[1:k]
        logpi = -t.nlp_mid[1:k]
        with np.errstate(divide="ignore", invalid="ignore"):
            est = np.log2(k - mm + 1.0) + np.logaddexp2(mm, logpi / math.log(2)) - logpi / math.log(2) - np.log2(tt)
        est[tt <= 0] = np.inf
        candidates = [int(mm[i]) for i in np.argsort(est, kind="stable")[:8] if np.isfinite(est[i])]
    best = None
    for mi in sorted(candidates):
        value, params = _addendum_at(rad, mi)
        if value is None:
            continue
        if best is None or value.sort_key() < best[0].sort_key():
            best = (value, params)
    if best is None:
        return _na("addendum", "no m < k with 1 - sigma^{-1}(n/d) > 0")
    return BoundReport("addendum", True, "", best[0], best[1])


# ---------------------------------------------------------------------------
# suite


SUITE_NAMES = (
    "jacobsthal_original",
    "jacobsthal_L",
    "kanold_2k",
    "kanold_sqrt",
    "stevens_published",
    "westzynthius_sieve",
    "kanold_p",
    "variation",
    "observation",
    "improvement",
    "stevens_refined",
    "sigma_pi",
    "sigma_pi_corollary",
    "loglog_closed",
    "addendum",
)


def _k_bound(fn, kmin: int):
    name = fn.__name__.removeprefix("bound_")

    def run(rad: Radical, ctx: BoundContext) -> BoundReport:
        if rad.k < kmin:
            return _na(name, f"needs k >= {kmin}")
        return fn(rad.k)

    return run


_EVALUATORS: dict[str, Callable[[Radical, BoundContext], BoundReport]] = {
    "jacobsthal_original": _k_bound(bound_jacobsthal_original, 1),
    "jacobsthal_L": _k_bound(bound_jacobsthal_L, 1),
    "kanold_2k": _k_bound(bound_kanold_2k, 1),
    "kanold_sqrt": _k_bound(bound_kanold_sqrt, 1),
    "stevens_published": _k_bound(bound_stevens_published, 2),
    "westzynthius_sieve": lambda rad, ctx: bound_westzynthius_sieve(rad),
    "kanold_p": lambda rad, ctx: bound_kanold_p(rad),
    "variation": lambda rad, ctx: bound_variation(rad),
    "observation": lambda rad, ctx: bound_observation(rad, ctx=ctx),
    "improvement": lambda rad, ctx: bound_improvement(rad),
    "stevens_refined": lambda rad, ctx: bound_stevens_refined(rad, ctx.table),
    "sigma_pi": lambda rad, ctx: bound_sigma_pi(rad),
    "sigma_pi_corollary": lambda rad, ctx: bound_sigma_pi_corollary(rad),
    "loglog_closed": _k_bound(bound_loglog_closed, 3),
    "addendum": lambda rad, ctx: bound_addendum(rad),
}


def evaluate_suite(rad: Radical, which=None, ctx: BoundContext | None = None) -> list[BoundReport]:
    """One report per bound, in the fixed suite order."""
    ctx = ctx or BoundContext()
    names = SUITE_NAMES if which is None else tuple(which)
    unknown = [n for n in names if n not in _EVALUATORS and n != "exact"]
    if unknown:
        raise DomainError(f"unknown bound(s): {', '.join(unknown)}")
    out = []
    for name in names:
        if name == "exact":
            out.append(exact_report(rad, ctx))
        else:
            out.append(_EVALUATORS[name](rad, ctx))
    return out


def exact_report(rad: Radical, ctx: BoundContext | None = None) -> BoundReport:
    ctx = ctx or BoundContext()
    try:
        res = g_exact(rad, budget=ctx.exact_budget, threads=ctx.threads)
    except CapacityError as exc:
        return _na("exact", str(exc))
    return BoundReport("exact", True, "", BoundValue.from_int(res.g), {"L": res.L, "a": res.a, "b": res.b})


def best_bound(
    rad: Radical,
    ctx: BoundContext | None = None,
    include_observation: bool = True,
    include_exact: bool = True,
) -> BoundReport:
    """Smallest applicable bound on g; ties go to the alphabetically first name."""
    ctx = ctx or BoundContext()
    names = [n for n in SUITE_NAMES if include_observation or n != "observation"]
    if include_exact:
        names.append("exact")
    reports = [r for r in evaluate_suite(rad, names, ctx) if r.applicable]
    return min(reports, key=lambda r: (r.g_value().sort_key(), r.name))
