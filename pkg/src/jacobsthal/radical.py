"""Squarefree radicals and the quantities sigma^{-1}, pi^{-1} and T built from them."""
from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .certified import UNIT_ROUNDOFF, CertifiedReal, certified_fsum, down, up
from .errors import CapacityError, DomainError, FactoringTimeout, NotSquarefreeError, RadicalParseError
from .primes import PrimeTable, shared_table

EXACT_K_MAX = 64
TOTATIVE_K_MAX = 24
FACTOR_MAX = 10**12

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BELOW = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_DETERMINISTIC_BELOW:
        raise DomainError(f"{n} is too large for deterministic primality testing")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Radical:
    """A squarefree integer held as its ascending distinct prime factors."""

    primes: tuple[int, ...]

    def __post_init__(self):
        ps = self.primes
        if not ps:
            raise DomainError("a radical needs at least one prime")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise DomainError("radical primes must be strictly increasing")
        bad = [q for q in ps if not is_prime(q)]
        if bad:
            raise DomainError(f"not prime: {bad[0]}")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "Radical":
        ps = sorted(int(q) for q in primes)
        if len(set(ps)) != len(ps):
            raise DomainError("duplicate prime in radical")
        return cls(tuple(ps))

    @classmethod
    def trusted(cls, primes: Sequence[int]) -> "Radical":
        """Skip the primality check for primes that come straight from a sieve."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "primes", tuple(int(q) for q in primes))
        return obj

    @classmethod
    def primorial(cls, k: int, table: PrimeTable | None = None) -> "Radical":
        if k < 1:
            raise DomainError("P_k needs k >= 1")
        table = table or shared_table(min_count=k)
        if k > table.count:
            raise CapacityError(f"P_{k} needs {k} primes, table has {table.count}")
        rad = cls.trusted(table.primes[:k].tolist())
        rad.__dict__["array"] = table.primes[:k]
        return rad

    @property
    def k(self) -> int:
        return len(self.primes)

    @cached_property
    def n(self) -> int:
        return math.prod(self.primes)

    @cached_property
    def array(self) -> np.ndarray:
        if self.primes[-1] < 2**62:
            return np.array(self.primes, dtype=np.int64)
        return np.array(self.primes, dtype=object)

    @property
    def q1(self) -> int:
        return self.primes[0]

    @property
    def qk(self) -> int:
        return self.primes[-1]

    def is_initial_segment(self, table: PrimeTable | None = None) -> bool:
        """True when the radical is exactly P_k."""
        table = table or shared_table(min_count=self.k)
        if self.k > table.count:
            return False
        return bool(np.array_equal(self.array, table.primes[: self.k]))

    def sub(self, start: int, stop: int | None = None) -> "Radical":
        """Radical of the primes with 0-based positions in [start, stop)."""
        return Radical.trusted(self.primes[start:stop])

    def to_json(self) -> str:
        return json.dumps({"primes": list(self.primes), "k": self.k})

    def __str__(self):
        if self.k <= 8:
            return ",".join(map(str, self.primes))
        return f"{self.primes[0]},{self.primes[1]},...,{self.primes[-1]} (k={self.k})"

    def __hash__(self):
        return hash(self.primes)

    def __eq__(self, other):
        return isinstance(other, Radical) and self.primes == other.primes

    # cached numerics; see sigma_inv / pi_inv
    @cached_property
    def _sigma(self) -> CertifiedReal:
        if self.k <= EXACT_K_MAX:
            return CertifiedReal.from_fraction(sum(Fraction(1, q) for q in self.primes))
        recips = 1.0 / self.array.astype(np.float64)
        return certified_fsum(recips.tolist(), UNIT_ROUNDOFF)

    @cached_property
    def _neg_log_pi(self) -> CertifiedReal:
        """Enclosure of -log pi^{-1}(n) = -sum log(1 - 1/q)."""
        if self.k <= EXACT_K_MAX:
            return -self._pi.log()
        x = 1.0 / self.array.astype(np.float64)
        terms = -np.log1p(-x)
        s = math.fsum(terms.tolist())
        err = 4 * UNIT_ROUNDOFF * math.fsum((terms + x).tolist()) + UNIT_ROUNDOFF * abs(s)
        err = up(err * (1 + 2.0 ** -30))
        return CertifiedReal(down(s - err), up(s + err))

    @cached_property
    def _pi(self) -> CertifiedReal:
        if self.k <= EXACT_K_MAX:
            num = math.prod(q - 1 for q in self.primes)
            return CertifiedReal.from_fraction(Fraction(num, self.n))
        return (-self._neg_log_pi).exp()


def sigma_inv(rad: Radical) -> CertifiedReal:
    """Certified sum of 1/q over the primes of ``rad`` (exact for k <= 64)."""
    return rad._sigma


def pi_inv(rad: Radical) -> CertifiedReal:
    """Certified product of (1 - 1/q); equals phi(n)/n.  Exact for k <= 64."""
    return rad._pi


@dataclass(frozen=True)
class Mediant:
    """T = (1/pi^{-1})^{1/sigma^{-1}} and its two sandwich values."""

    value: CertifiedReal
    lower: CertifiedReal  # (q_k/(q_k-1))^{q_k}
    upper: CertifiedReal  # (q_1/(q_1-1))^{q_1}


def _power_term(q: int) -> CertifiedReal:
    base = Fraction(q, q - 1)
    if q <= EXACT_K_MAX:
        return CertifiedReal.from_fraction(base**q)
    return (CertifiedReal.from_fraction(base).log() * q).exp()


def mediant_T(rad: Radical) -> Mediant:
    sig = sigma_inv(rad)
    pi = pi_inv(rad)
    value = None
    if sig.exact is not None and pi.exact is not None and sig.exact.numerator == 1:
        d = sig.exact.denominator
        if d <= EXACT_K_MAX:
            value = CertifiedReal.from_fraction((1 / pi.exact) ** d)
    if value is None:
        value = (rad._neg_log_pi / sig).exp()
    return Mediant(value=value, lower=_power_term(rad.qk), upper=_power_term(rad.q1))


def _signed_divisors(primes: Sequence[int], x: int):
    """Squarefree divisors t <= x of prod(primes) with their Moebius signs."""
    divs = [1]
    signs = [1]
    for q in primes:
        nd, ns = [], []
        for d, s in zip(divs, signs):
            t = d * q
            if t <= x:
                nd.append(t)
                ns.append(-s)
        divs += nd
        signs += ns
    return divs, signs


def totative_count(rad: Radical, x: int) -> int:
    """Number of integers in [1, x] coprime to n, by inclusion-exclusion."""
    if rad.k > TOTATIVE_K_MAX:
        raise CapacityError(f"inclusion-exclusion over 2^{rad.k} divisors is disabled above k={TOTATIVE_K_MAX}")
    if x < 0:
        raise DomainError("x must be non-negative")
    divs, signs = _signed_divisors(rad.primes, x)
    if x < 2**62:
        d = np.array(divs, dtype=np.int64)
        s = np.array(signs, dtype=np.int64)
        return int((s * (x // d)).sum())
    return sum(s * (x // d) for d, s in zip(divs, signs))


# ---------------------------------------------------------------------------
# parsing

_PRIMORIAL_RE = re.compile(r"^[Pp](\d+)$")


def _pollard_brent(n: int, max_iter: int = 200_000) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    for _attempt in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        iters = 0
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            iters += r
            if iters > max_iter:
                raise FactoringTimeout(f"Pollard rho gave up on {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactoringTimeout(f"Pollard rho gave up on {n}")


def _factor_squarefree(n: int, table: PrimeTable | None) -> list[int]:
    found = []
    rest = n
    bound = min(10**4, math.isqrt(n))
    small = table.primes if table is not None else shared_table().primes
    for p in small[: np.searchsorted(small, bound, side="right")].tolist():
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                raise NotSquarefreeError(f"{n} is not squarefree (divisible by {p}^2)")
            found.append(p)
        if p * p > rest:
            break
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            found.append(m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            raise NotSquarefreeError(f"{n} is not squarefree (divisible by {r}^2)")
        d = _pollard_brent(m)
        stack += [d, m // d]
    if len(set(found)) != len(found):
        raise NotSquarefreeError(f"{n} is not squarefree")
    return sorted(found)


def parse_radical(spec: str, table: PrimeTable | None = None) -> Radical:
    """Parse ``"2,3,5"``, ``"P4"`` or a squarefree integer up to 10^12."""
    text = spec.strip().replace(" ", "")
    m = _PRIMORIAL_RE.match(text)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise RadicalParseError("P0 has no prime factors")
        return Radical.primorial(k, table)
    if "," in text:
        try:
            items = [int(t) for t in text.split(",") if t]
        except ValueError:
            raise RadicalParseError(f"not a prime list: {spec!r}") from None
        for q in items:
            if not is_prime(q):
                raise RadicalParseError(f"{q} is not prime")
        if len(set(items)) != len(items):
            raise RadicalParseError("duplicate prime in list")
        return Radical(tuple(sorted(items)))
    try:
        n = int(text)
    except ValueError:
        raise RadicalParseError(f"cannot parse radical {spec!r}") from None
    if n < 2:
        raise RadicalParseError("n must be at least 2")
    if n > FACTOR_MAX:
        raise RadicalParseError(f"{n} exceeds the factoring limit {FACTOR_MAX}; pass its primes instead")
    return Radical(tuple(_factor_squarefree(n, table)))
