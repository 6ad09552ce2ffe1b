"""Prime tables, certified reciprocal prefix sums and explicit prime-bound checks.

The table is built by a segmented odd-only sieve of Eratosthenes and carries,
for every prefix of the prime list, a compensated sum of reciprocals together
with a rigorous bound on its accumulated rounding error.
"""
from __future__ import annotations

import hashlib
import logging
import math
import os
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath
import numba
import numpy as np

from .certified import UNIT_ROUNDOFF, CertifiedReal, fraction_bounds, up
from .errors import CapacityError, DomainError

log = logging.getLogger(__name__)

MAX_SIEVE_LIMIT = 2 * 10**8
SEGMENT_ODDS = 1 << 18  # 256 KiB of flags per segment
CACHE_MAGIC = b"JPRIMES1"
CACHE_ENV = "JACOBSTHAL_CACHE_DIR"

# Constants to 20 significant digits (OEIS A077761, A001620, A080130).
MERTENS_B_TEXT = "0.26149721284764278375"
EULER_GAMMA_TEXT = "0.57721566490153286061"
EXP_MINUS_GAMMA_TEXT = "0.56145948356688516982"


@dataclass(frozen=True)
class MertensConstants:
    B: float
    gamma: float
    e_minus_gamma: float

    @property
    def B_enclosure(self) -> CertifiedReal:
        # the 20-digit literal is itself only accurate to half a unit in its last place
        q = Fraction(MERTENS_B_TEXT)
        eps = Fraction(1, 2 * 10**20)
        return CertifiedReal(fraction_bounds(q - eps)[0], fraction_bounds(q + eps)[1])


MERTENS = MertensConstants(
    B=float(MERTENS_B_TEXT),
    gamma=float(EULER_GAMMA_TEXT),
    e_minus_gamma=float(EXP_MINUS_GAMMA_TEXT),
)


# ---------------------------------------------------------------------------
# sieve


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Odd primes in [lo, hi); ``lo`` is odd, ``base`` holds odd primes up to sqrt(hi)."""
    count = (hi - lo + 1) // 2
    flags = np.ones(count, dtype=bool)
    for p in base.tolist():
        p2 = p * p
        if p2 >= hi:
            break
        start = max(p2, -(-lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            flags[(start - lo) // 2 :: p] = False
    return lo + 2 * np.flatnonzero(flags).astype(np.int64)


def sieve_primes(limit: int, threads: int = 1) -> np.ndarray:
    """All primes <= limit as an ascending int64 array.

    Segments are independent, so the result is identical for any thread count.
    """
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    root = math.isqrt(limit)
    base = _small_primes(root)
    base = base[base > 2]
    span = 2 * SEGMENT_ODDS
    starts = list(range(3, limit + 1, span))
    bounds = [(s, min(s + span, limit + 1)) for s in starts]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _sieve_segment(b[0], b[1], base), bounds))
    else:
        parts = [_sieve_segment(lo, hi, base) for lo, hi in bounds]
    return np.concatenate([np.array([2], dtype=np.int64)] + parts)


@numba.njit(cache=True)
def _neumaier_prefix(recips):
    """Compensated running sums; also returns a bound on the rounding
    error of each compensated total (excluding input representation error)."""
    n = recips.shape[0]
    sums = np.empty(n + 1)
    errs = np.empty(n + 1)
    sums[0] = 0.0
    errs[0] = 0.0
    s = 0.0
    c = 0.0
    acc = 0.0
    u = 2.0 ** -53
    for i in range(n):
        x = recips[i]
        t = s + x
        bb = t - s
        e = (s - (t - bb)) + (x - bb)
        s = t
        c = c + e
        acc += u * abs(c)
        total = s + c
        sums[i + 1] = total
        errs[i + 1] = acc + u * abs(total)
    return sums, errs


def _recip_prefix(primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    recips = 1.0 / primes.astype(np.float64)
    sums, errs = _neumaier_prefix(recips)
    # each correctly rounded 1/p is off by at most u * (1/p)
    rep = np.concatenate(([0.0], np.cumsum(recips))) * UNIT_ROUNDOFF
    err = (errs + rep) * (1 + 2.0 ** -30)
    # the running accumulator never decreases, and neither does err
    err = np.maximum.accumulate(err)
    return sums, err


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primes up to ``limit`` with certified prefix sums of reciprocals.

    ``recip_sum[i]`` and ``recip_err[i]`` describe the first ``i`` primes, so
    index 0 is the empty sum and the true value of ``sum_{j<=i} 1/p_j`` lies in
    ``[recip_sum[i] - recip_err[i], recip_sum[i] + recip_err[i]]``.
    """

    limit: int
    primes: np.ndarray
    recip_sum: np.ndarray = field(repr=False)
    recip_err: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.primes, self.recip_sum, self.recip_err):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.primes)

    @property
    def count(self) -> int:
        return len(self.primes)

    @property
    def recip_prefix(self) -> np.ndarray:
        out = np.empty(len(self.recip_sum), dtype=[("sum", "f8"), ("err_bound", "f8")])
        out["sum"] = self.recip_sum
        out["err_bound"] = self.recip_err
        return out

    def nth_prime(self, i: int) -> int:
        """p_i with p_1 = 2."""
        if i < 1:
            raise DomainError(f"prime index must be >= 1, got {i}")
        if i > self.count:
            raise CapacityError(f"p_{i} is beyond the table (limit {self.limit}, {self.count} primes)")
        return int(self.primes[i - 1])

    def pi(self, x: float) -> int:
        """Number of primes <= x (x must not exceed the table limit)."""
        if x > self.limit:
            raise CapacityError(f"pi({x}) needs a sieve beyond {self.limit}")
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def primorial(self, k: int) -> int:
        if k < 0:
            raise DomainError("primorial index must be >= 0")
        if k > self.count:
            raise CapacityError(f"P_{k} needs {k} primes, table has {self.count}")
        return math.prod(self.primes[:k].tolist())

    def prefix_enclosure(self, i: int) -> CertifiedReal:
        """Enclosure of sum_{j<=i} 1/p_j."""
        if not 0 <= i <= self.count:
            raise CapacityError(f"prefix {i} outside table of {self.count} primes")
        return CertifiedReal.around(float(self.recip_sum[i]), float(self.recip_err[i]))

    def prefix_recip_sum(self, m: int, u: int) -> CertifiedReal:
        """Enclosure of sum_{j=1..u} 1/p_{m+j}."""
        if m < 0 or u < 0:
            raise DomainError("m and u must be non-negative")
        if m + u > self.count:
            raise CapacityError(f"p_{m + u} is beyond the table ({self.count} primes)")
        if u == 0:
            return CertifiedReal.from_fraction(0)
        diff = float(self.recip_sum[m + u]) - float(self.recip_sum[m])
        err = float(self.recip_err[m + u]) + float(self.recip_err[m]) + UNIT_ROUNDOFF * abs(diff)
        return CertifiedReal.around(diff, up(err))

    def tail_sums(self, m: int, u_max: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised midpoints and error radii of sum_{j=1..u} 1/p_{m+j}, u = 0..u_max."""
        if m + u_max > self.count:
            raise CapacityError(f"p_{m + u_max} is beyond the table ({self.count} primes)")
        s = self.recip_sum[m : m + u_max + 1] - self.recip_sum[m]
        e = self.recip_err[m : m + u_max + 1] + self.recip_err[m]
        e = (e + UNIT_ROUNDOFF * np.abs(s)) * (1 + 2.0 ** -30)
        e[0] = 0.0
        return s, e


def table_from_primes(limit: int, primes: np.ndarray) -> PrimeTable:
    primes = np.ascontiguousarray(primes, dtype=np.int64)
    sums, errs = _recip_prefix(primes)
    return PrimeTable(limit=int(limit), primes=primes, recip_sum=sums, recip_err=errs)


# ---------------------------------------------------------------------------
# disk cache


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    d = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def _checksum(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def encode_cache(limit: int, primes: np.ndarray) -> bytes:
    gaps = np.diff(primes, prepend=0)
    if len(gaps) and gaps.max() > 0xFFFF:
        raise CapacityError("prime gap does not fit the 16-bit cache encoding")
    body = CACHE_MAGIC + struct.pack("<QQ", limit, len(primes)) + gaps.astype("<u2").tobytes()
    return body + struct.pack("<Q", _checksum(body))


def decode_cache(blob: bytes) -> tuple[int, np.ndarray]:
    """Inverse of :func:`encode_cache`; raises ``ValueError`` on any mismatch."""
    if len(blob) < 32 or blob[:8] != CACHE_MAGIC:
        raise ValueError("bad magic")
    limit, count = struct.unpack_from("<QQ", blob, 8)
    if len(blob) != 24 + 2 * count + 8:
        raise ValueError("truncated cache")
    (stored,) = struct.unpack_from("<Q", blob, len(blob) - 8)
    if stored != _checksum(blob[:-8]):
        raise ValueError("checksum mismatch")
    gaps = np.frombuffer(blob, dtype="<u2", count=count, offset=24).astype(np.int64)
    return int(limit), np.cumsum(gaps)


def cache_path(cache_dir: Path, limit: int) -> Path:
    return cache_dir / f"primes_{limit}.bin"


def _load_cached(cache_dir: Path, limit: int) -> np.ndarray | None:
    candidates = []
    for p in cache_dir.glob("primes_*.bin"):
        try:
            lim = int(p.stem.split("_", 1)[1])
        except ValueError:
            continue
        if lim >= limit:
            candidates.append((lim, p))
    for lim, p in sorted(candidates):
        try:
            stored_limit, primes = decode_cache(p.read_bytes())
        except (OSError, ValueError) as exc:
            log.warning("ignoring prime cache %s: %s", p, exc)
            continue
        if stored_limit != lim:
            log.warning("ignoring prime cache %s: limit mismatch", p)
            continue
        return primes[: np.searchsorted(primes, limit, side="right")]
    return None


def build_prime_table(limit: int, threads: int = 1, cache_dir=None, max_limit: int = MAX_SIEVE_LIMIT) -> PrimeTable:
    """Sieve (or load from cache) every prime up to ``limit``."""
    if not 2 <= limit <= max_limit:
        raise CapacityError(f"sieve limit {limit} outside [2, {max_limit}]")
    cdir = _cache_dir(cache_dir)
    primes = _load_cached(cdir, limit) if cdir is not None and cdir.is_dir() else None
    if primes is None:
        primes = sieve_primes(limit, threads=threads)
        if cdir is not None:
            cdir.mkdir(parents=True, exist_ok=True)
            tmp = cache_path(cdir, limit).with_suffix(".tmp")
            tmp.write_bytes(encode_cache(limit, primes))
            tmp.replace(cache_path(cdir, limit))
    return table_from_primes(limit, primes)


def limit_for_count(count: int) -> int:
    """A sieve limit guaranteed to reach the ``count``-th prime."""
    if count < 6:
        return 13
    n = float(count)
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


_shared: PrimeTable | None = None
_shared_lock = threading.Lock()


def shared_table(min_limit: int = 0, min_count: int = 0) -> PrimeTable:
    """Process-wide table, grown on demand and never shrunk."""
    global _shared
    need = max(min_limit, limit_for_count(min_count) if min_count else 0, 1 << 16)
    with _shared_lock:
        if _shared is None or _shared.limit < need:
            target = need if _shared is None else max(need, min(2 * _shared.limit, MAX_SIEVE_LIMIT))
            _shared = build_prime_table(target)
        return _shared


def reset_shared_table() -> None:
    global _shared
    with _shared_lock:
        _shared = None


def nth_prime(i: int, table: PrimeTable | None = None) -> int:
    table = table or shared_table(min_count=i)
    return table.nth_prime(i)


def primorial(k: int, table: PrimeTable | None = None) -> int:
    table = table or shared_table(min_count=k)
    return table.primorial(k)


def prefix_recip_sum(m: int, u: int, table: PrimeTable | None = None) -> CertifiedReal:
    table = table or shared_table(min_count=m + u)
    return table.prefix_recip_sum(m, u)


# ---------------------------------------------------------------------------
# explicit inequalities of Rosser and Schoenfeld


def _decide(lhs: CertifiedReal, rhs: CertifiedReal, exact_check) -> bool:
    """Is lhs < rhs?  Falls back to 60-digit mpmath when enclosures overlap."""
    if lhs.hi < rhs.lo:
        return True
    if lhs.lo >= rhs.hi:
        return False
    with mpmath.workdps(60):
        return bool(exact_check())


def check_rs_theorem6(k: int, table: PrimeTable | None = None) -> bool:
    """log p_k < log k + log(log k + log log k), for k > 5."""
    if k <= 5:
        raise DomainError("the nth-prime bound is stated for k > 5")
    p = nth_prime(k, table)
    lk = CertifiedReal.coerce(k).log()
    rhs = lk + (lk + lk.log()).log()
    lhs = CertifiedReal.coerce(p).log()

    def exact():
        mk = mpmath.log(k)
        return mpmath.log(p) < mk + mpmath.log(mk + mpmath.log(mk))

    return _decide(lhs, rhs, exact)


def sweep_rs_theorem6(k_max: int, table: PrimeTable | None = None) -> np.ndarray:
    """Indices k in (5, k_max] where the nth-prime bound fails (expected empty)."""
    table = table or shared_table(min_count=k_max)
    if k_max > table.count:
        raise CapacityError(f"p_{k_max} is beyond the table")
    k = np.arange(6, k_max + 1, dtype=np.float64)
    p = table.primes[5:k_max].astype(np.float64)
    lk = np.log(k)
    lhs = np.log(p)
    rhs = lk + np.log(lk + np.log(lk))
    slack = 16 * UNIT_ROUNDOFF * (np.abs(lhs) + np.abs(rhs) + 1)
    undecided = np.flatnonzero(lhs + slack >= rhs - slack)
    bad = [int(k[i]) for i in undecided if not check_rs_theorem6(int(k[i]), table)]
    return np.array(bad, dtype=np.int64)


def _mertens_excess(x: float, table: PrimeTable) -> CertifiedReal:
    """Enclosure of sum_{p<=x} 1/p - log log x - B."""
    s = table.prefix_enclosure(table.pi(x))
    return s - CertifiedReal.coerce(float(x)).log().log() - MERTENS.B_enclosure


def check_rs_theorem5(x: float, table: PrimeTable | None = None) -> bool:
    """|sum_{p<=x} 1/p - log log x - B| <= 1/(2 log^2 x) for x >= 286.

    True only when the whole certified enclosure sits inside the band.
    """
    if x < 286:
        raise DomainError(f"the two-sided Mertens band is stated for x >= 286, got {x}")
    table = table or shared_table(min_limit=int(x))
    if x > table.limit:
        raise DomainError(f"x={x} exceeds the table limit {table.limit}")
    excess = _mertens_excess(x, table)
    lx = CertifiedReal.coerce(float(x)).log()
    band = 1 / (2 * lx * lx)
    return -band.lo <= excess.lo and excess.hi <= band.lo


def check_rs_theorem20(x: float, table: PrimeTable | None = None) -> bool:
    """sum_{p<=x} 1/p > log log x + B on 2 <= x <= 10^8, decided on the lower end."""
    table = table or shared_table(min_limit=int(x))
    if not 2 <= x <= min(10**8, table.limit):
        raise DomainError(f"x={x} outside [2, min(1e8, table limit)]")
    return _mertens_excess(x, table).lo > 0.0
