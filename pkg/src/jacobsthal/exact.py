"""Exact Jacobsthal values by full-period scans, a gcd oracle and CRT witnesses."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from .errors import CapacityError, DomainError
from .primes import MERTENS, PrimeTable, shared_table
from .radical import Radical

SCAN_BUDGET = 10**10
NAIVE_BUDGET = 10**7
SEGMENT = 1 << 22
SMALL_SCAN_MAX = 1 << 20
WHEEL_MAX = 1 << 16


@dataclass(frozen=True)
class ScanResult:
    """Outcome of scanning one full period [1, n+1].

    ``a`` is the smallest start of a maximal run of nontotatives (the run is
    ``a+1 .. a+L``) and ``b`` the number of such runs in the period.
    """

    g: int
    L: int
    a: int
    b: int
    witness_start: int


# per-segment summary: (first totative, last totative, best gap, #best gaps, first best gap start)
_Summary = tuple


def _merge(left: _Summary | None, right: _Summary | None) -> _Summary | None:
    if left is None:
        return right
    if right is None:
        return left
    f1, l1, g1, c1, s1 = left
    f2, l2, g2, c2, s2 = right
    best, cnt, start = g1, c1, s1
    for gap, c, s in ((f2 - l1, 1, l1), (g2, c2, s2)):
        if gap > best:
            best, cnt, start = gap, c, s
        elif gap == best and gap > 0:
            cnt += c
    return (f1, l2, best, cnt, start)


def _wheel(primes: Sequence[int]) -> tuple[int, list[int], list[int]]:
    w, used = 1, []
    for q in primes:
        if w * q > WHEEL_MAX:
            break
        w *= q
        used.append(q)
    return w, used, list(primes[len(used) :])


def _scan_segment(lo: int, hi: int, pattern: np.ndarray, w: int, rest: list[int]) -> _Summary | None:
    """Summary of totatives among positions lo..hi-1 (lo a multiple of w)."""
    size = hi - lo
    mask = pattern[:size].copy()
    for q in rest:
        off = (-lo) % q
        if off < size:
            mask[off::q] = True
    tot = np.flatnonzero(~mask)
    if tot.size == 0:
        return None
    tot += lo
    if tot.size == 1:
        t = int(tot[0])
        return (t, t, 0, 0, 0)
    gaps = np.diff(tot)
    i = int(gaps.argmax())
    best = int(gaps[i])
    return (int(tot[0]), int(tot[-1]), best, int(np.count_nonzero(gaps == best)), int(tot[i]))


@numba.njit(cache=True)
def _scan_small(primes, n):
    """Single-pass scan of [0, n+1] for small n, where array setup dominates."""
    mask = np.zeros(n + 2, np.bool_)
    mask[0] = True
    for q in primes:
        for x in range(q, n + 2, q):
            mask[x] = True
    best = 0
    cnt = 0
    start = 0
    last = 1
    for x in range(2, n + 2):
        if not mask[x]:
            gap = x - last
            if gap > best:
                best = gap
                cnt = 1
                start = last
            elif gap == best:
                cnt += 1
            last = x
    return best, cnt, start


def g_exact(rad: Radical, budget: int = SCAN_BUDGET, threads: int = 1) -> ScanResult:
    """g(n), L(n), a(n), b(n) from a segmented scan of [1, n+1].

    1 and n+1 are both totatives, so every gap of the period is interior.
    The merge of segment summaries is associative, so the result does not
    depend on ``threads``.
    """
    n = rad.n
    if n > budget:
        raise CapacityError(f"n = {n} exceeds the scan budget {budget}; use the bound suite instead")
    if n <= SMALL_SCAN_MAX:
        g, count, start = _scan_small(np.asarray(rad.primes, dtype=np.int64), n)
        return ScanResult(g=int(g), L=int(g) - 1, a=int(start), b=int(count), witness_start=int(start))
    w, wheel_primes, rest = _wheel(rad.primes)
    base = np.zeros(w, dtype=bool)
    for q in wheel_primes:
        base[::q] = True
    seg = w * max(1, min(SEGMENT, n + 2) // w)
    if seg < n + 2:
        seg = w * max(1, SEGMENT // w)
    else:
        seg = w * (-(-(n + 2) // w))
    tail = np.tile(base, seg // w)
    head = tail.copy()
    head[0] = True  # position 0 is n's own residue class, never a totative
    bounds = [(lo, min(lo + seg, n + 2)) for lo in range(0, n + 2, seg)]

    def scan(b):
        lo, hi = b
        return _scan_segment(lo, hi, head if lo == 0 else tail, w, rest)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(scan, bounds))
    else:
        parts = [scan(b) for b in bounds]
    total = None
    for p in parts:
        total = _merge(total, p)
    _, _, g, count, start = total
    return ScanResult(g=g, L=g - 1, a=start, b=count, witness_start=start)


@numba.njit(cache=True)
def _gcd_scan_half(n):
    """Largest gap between totatives found by per-integer Euclid.

    Totatives are symmetric under x -> n - x, so the gap sequence on
    [1, n-1] is a palindrome; scanning up to the first totative >= n/2
    sees every gap.  The final gap (n-1, n+1) has length 2.
    Four independent Euclid chains run side by side to hide division latency.
    """
    nn = np.uint32(n)
    best = 2
    last = 1
    x = 2
    while True:
        a0 = nn
        b0 = np.uint32(x)
        a1 = nn
        b1 = np.uint32(x + 1)
        a2 = nn
        b2 = np.uint32(x + 2)
        a3 = nn
        b3 = np.uint32(x + 3)
        while b0 | b1 | b2 | b3:
            if b0:
                a0, b0 = b0, a0 % b0
            if b1:
                a1, b1 = b1, a1 % b1
            if b2:
                a2, b2 = b2, a2 % b2
            if b3:
                a3, b3 = b3, a3 % b3
        for j in range(4):
            v = a0 if j == 0 else (a1 if j == 1 else (a2 if j == 2 else a3))
            if v == 1:
                xi = x + j
                if xi - last > best:
                    best = xi - last
                last = xi
                if 2 * xi >= n:
                    return best
        x += 4


def g_naive(rad: Radical | int, budget: int = NAIVE_BUDGET) -> int:
    """g(n) from gcd(x, n) for each integer x; ``rad`` may be any integer >= 2."""
    n = rad.n if isinstance(rad, Radical) else int(rad)
    if n < 2:
        raise DomainError("g is only scanned for n >= 2")
    if n > budget:
        raise CapacityError(f"n = {n} exceeds the gcd-scan budget {budget}")
    if n >= 2**32 - 8:
        raise CapacityError("the gcd scan runs in 32-bit arithmetic")
    return int(_gcd_scan_half(n))


# ---------------------------------------------------------------------------
# table of exact values for every squarefree n up to a limit


@numba.njit(cache=True)
def _g_table_kernel(limit, lpf, spf, squarefree):
    g = np.zeros(limit + 1, np.int64)
    g[1] = 1
    pos = np.zeros(limit + 1, np.int64)
    tot = np.zeros(limit + 1, np.int64)
    flags = np.zeros(limit + 1, np.bool_)
    fac = np.zeros(32, np.int64)
    for n in range(2, limit + 1):
        if not squarefree[n]:
            continue
        q = lpf[n]
        m = n // q
        # prime factors of m
        nf = 0
        r = m
        while r > 1:
            p = spf[r]
            fac[nf] = p
            nf += 1
            r //= p
        # sorted totatives of m in [1, m]
        for x in range(1, m + 1):
            flags[x] = True
        for i in range(nf):
            p = fac[i]
            for x in range(p, m + 1, p):
                flags[x] = False
        phi = 0
        for x in range(1, m + 1):
            if flags[x]:
                tot[phi] = x
                pos[x] = phi
                phi += 1
        # multiples j*q (j a totative of m) are the m-totatives removed by q
        best = g[m]
        prev_idx = -2
        block_start = -2
        for t in range(phi):
            c = tot[t] * q
            idx = ((c - 1) // m) * phi + pos[((c - 1) % m) + 1]
            if idx != prev_idx + 1:
                if block_start >= 0:
                    hi_i = prev_idx + 1
                    lo_i = block_start - 1
                    gap = ((hi_i // phi) * m + tot[hi_i % phi]) - ((lo_i // phi) * m + tot[lo_i % phi])
                    if gap > best:
                        best = gap
                block_start = idx
            prev_idx = idx
        if block_start >= 0:
            hi_i = prev_idx + 1
            lo_i = block_start - 1
            gap = ((hi_i // phi) * m + tot[hi_i % phi]) - ((lo_i // phi) * m + tot[lo_i % phi])
            if gap > best:
                best = gap
        g[n] = best
    return g


def factor_tables(limit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smallest and largest prime factor arrays and a squarefree mask for 0..limit."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    lpf = np.zeros(limit + 1, dtype=np.int64)
    sqf = np.ones(limit + 1, dtype=bool)
    sqf[0] = False
    table = shared_table(min_limit=max(limit, 2))
    primes = table.primes[: table.pi(limit)]
    for p in primes[::-1].tolist():
        spf[p::p] = p
    for p in primes.tolist():
        lpf[p::p] = p
        if p * p <= limit:
            sqf[p * p :: p * p] = False
    return spf, lpf, sqf


def g_table(limit: int) -> np.ndarray:
    """Exact g(n) for every squarefree n <= limit (0 elsewhere, g(1) = 1).

    Writing n = m*q with q the largest prime of n, the totatives of n over a
    period are those of m minus the multiples of q.  Each gap of m survives
    in at least one of the q >= 3 copies, so g(n) is g(m) or one of the gaps
    opened by deleting multiples of q.  This is exact and costs O(m) per n.
    """
    if limit < 1:
        raise DomainError("limit must be positive")
    spf, lpf, sqf = factor_tables(limit)
    return _g_table_kernel(limit, lpf, spf, sqf)


# ---------------------------------------------------------------------------
# witnesses and lower bounds


@dataclass(frozen=True)
class Witness:
    """An interval (start, start + length] of integers that all share a prime with n."""

    start: int
    length: int
    moduli_assignment: dict = field(default_factory=dict)
    n: int = 0

    def validate(self) -> bool:
        return all(math.gcd(self.start + j, self.n) > 1 for j in range(1, self.length + 1))


def crt_solve(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """x with x = r_i (mod m_i) for pairwise coprime moduli; returns (x mod M, M)."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        r %= m
        t = ((r - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M


def crt_witness(rad: Radical, perm: Sequence[int] | None = None) -> Witness:
    """Start b with b + perm(i) = 0 (mod q_i), so (b, b+k] are all nontotatives."""
    k = rad.k
    perm = list(range(1, k + 1)) if perm is None else [int(v) for v in perm]
    if sorted(perm) != list(range(1, k + 1)):
        raise DomainError(f"{perm} is not a permutation of 1..{k}")
    b, n = crt_solve([-v for v in perm], rad.primes)
    if b == 0:
        b = n
    return Witness(start=b, length=k, moduli_assignment=dict(zip(rad.primes, perm)), n=n)


def westzynthius_lower(k: int, table: PrimeTable | None = None) -> int:
    """2 p_{k-1} <= g(P_k)."""
    if k < 2:
        raise DomainError("the lower bound 2 p_{k-1} needs k >= 2")
    table = table or shared_table(min_count=k)
    return 2 * table.nth_prime(k - 1)


def asymptotic_lower_value(k: int, eps: float, table: PrimeTable | None = None) -> float:
    """e^gamma (1 - eps) p_k loglog p_k / logloglog p_k -- a formula value only,
    with no claim that it bounds g(P_k) for this k."""
    if not 0 < eps <= 1:
        raise DomainError("eps must lie in (0, 1]")
    table = table or shared_table(min_count=k)
    p = table.nth_prime(k)
    ll = math.log(math.log(p))
    if ll <= 1.0:
        raise DomainError(f"logloglog p_{k} = logloglog {p} is not positive")
    return math.exp(MERTENS.gamma) * (1 - eps) * p * ll / math.log(ll)
