"""Outward-rounded interval arithmetic on doubles.

Every operation rounds its endpoints one ulp outward with ``math.nextafter``
instead of switching the FPU rounding mode, which keeps the code portable and
thread-safe.  Transcendental functions get two ulps of padding since libm only
promises faithful rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

INF = math.inf
UNIT_ROUNDOFF = 2.0 ** -53

Number = Union[int, float, Fraction, "CertifiedReal"]


def down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -INF)
    return x


def up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, INF)
    return x


def fraction_bounds(q: Fraction) -> tuple[float, float]:
    """Tightest pair of doubles enclosing the rational ``q``."""
    f = float(q)  # correctly rounded
    if math.isinf(f):
        return (f, f) if f > 0 else (f, f)
    ff = Fraction(f)
    if ff == q:
        return f, f
    if ff < q:
        return f, up(f)
    return down(f), f


def int_log2_bounds(n: int) -> tuple[float, float]:
    """Enclosure of log2(n) for a positive integer of any size."""
    if n <= 0:
        raise ValueError("log2 of a non-positive integer")
    bits = n.bit_length()
    if bits <= 1000:
        v = math.log2(n)
    else:
        shift = bits - 64
        v = math.log2(n >> shift) + shift
        # n lies in [top << shift, (top + 1) << shift)
        hi = math.log2((n >> shift) + 1) + shift
        return down(v, 2), up(hi, 2)
    return down(v, 2), up(v, 2)


def fraction_log2_bounds(q: Fraction) -> tuple[float, float]:
    lo_n, hi_n = int_log2_bounds(q.numerator)
    lo_d, hi_d = int_log2_bounds(q.denominator)
    return down(lo_n - hi_d), up(hi_n - lo_d)


@dataclass(frozen=True)
class CertifiedReal:
    """Closed interval ``[lo, hi]`` known to contain an exact real.

    ``exact`` carries the rational value itself when it is cheap to keep.
    """

    lo: float
    hi: float
    exact: Fraction | None = None

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")
        if self.exact is not None and not (self.lo <= self.exact <= self.hi):
            raise ValueError("exact value outside enclosure")

    # construction -------------------------------------------------------

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> "CertifiedReal":
        q = Fraction(q)
        lo, hi = fraction_bounds(q)
        return cls(lo, hi, q)

    @classmethod
    def from_float(cls, x: float) -> "CertifiedReal":
        return cls(x, x, Fraction(x))

    @classmethod
    def from_decimal(cls, text: str) -> "CertifiedReal":
        return cls.from_fraction(Fraction(text))

    @classmethod
    def around(cls, x: float, err: float) -> "CertifiedReal":
        """Enclosure of ``x +- err`` with the endpoints rounded outward."""
        return cls(down(x - err), up(x + err))

    @classmethod
    def coerce(cls, x: Number) -> "CertifiedReal":
        if isinstance(x, CertifiedReal):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.from_fraction(x)
        if isinstance(x, (float, np.floating)):
            return cls.from_float(float(x))
        raise TypeError(f"cannot certify {type(x).__name__}")

    # queries -------------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: Number) -> bool:
        if isinstance(x, CertifiedReal):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            return self.lo <= x <= self.hi
        return self.lo <= Fraction(x) <= self.hi

    def certainly_lt(self, other: Number) -> bool:
        o = CertifiedReal.coerce(other)
        if self.exact is not None and o.exact is not None:
            return self.exact < o.exact
        return self.hi < o.lo

    def certainly_gt(self, other: Number) -> bool:
        return CertifiedReal.coerce(other).certainly_lt(self)

    # arithmetic ---------------------------------------------------------

    def __neg__(self):
        ex = -self.exact if self.exact is not None else None
        return CertifiedReal(-self.hi, -self.lo, ex)

    def __add__(self, other: Number):
        o = CertifiedReal.coerce(other)
        if self.exact is not None and o.exact is not None:
            return CertifiedReal.from_fraction(self.exact + o.exact)
        return CertifiedReal(down(self.lo + o.lo), up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other: Number):
        return self + (-CertifiedReal.coerce(other))

    def __rsub__(self, other: Number):
        return CertifiedReal.coerce(other) - self

    def __mul__(self, other: Number):
        o = CertifiedReal.coerce(other)
        if self.exact is not None and o.exact is not None:
            return CertifiedReal.from_fraction(self.exact * o.exact)
        prods = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return CertifiedReal(down(min(prods)), up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        o = CertifiedReal.coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        if self.exact is not None and o.exact is not None:
            return CertifiedReal.from_fraction(self.exact / o.exact)
        quots = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return CertifiedReal(down(min(quots)), up(max(quots)))

    def __rtruediv__(self, other: Number):
        return CertifiedReal.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if self.exact is not None and n <= 64:
            return CertifiedReal.from_fraction(self.exact ** n)
        result = CertifiedReal.from_fraction(1)
        base = self
        # square-and-multiply keeps the ulp growth logarithmic in n
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def log(self) -> "CertifiedReal":
        if self.lo <= 0:
            raise ValueError("log of an enclosure reaching zero")
        return CertifiedReal(down(math.log(self.lo), 2), up(math.log(self.hi), 2))

    def exp(self) -> "CertifiedReal":
        return CertifiedReal(max(0.0, down(math.exp(self.lo), 2)), up(math.exp(self.hi), 2))

    def sqrt(self) -> "CertifiedReal":
        if self.lo < 0:
            raise ValueError("sqrt of a negative enclosure")
        return CertifiedReal(max(0.0, down(math.sqrt(self.lo))), up(math.sqrt(self.hi)))

    def rpow(self, y: Number) -> "CertifiedReal":
        """``self ** y`` for a positive base and real exponent."""
        return (CertifiedReal.coerce(y) * self.log()).exp()

    def __repr__(self):
        tag = f", exact={self.exact}" if self.exact is not None and self.exact.denominator < 10**12 else ""
        return f"CertifiedReal([{self.lo!r}, {self.hi!r}]{tag})"


def certified_log(x: Number) -> CertifiedReal:
    return CertifiedReal.coerce(x).log()


def certified_loglog(x: Number) -> CertifiedReal:
    return CertifiedReal.coerce(x).log().log()


def certified_fsum(values: Iterable[float], value_err: float = 0.0) -> CertifiedReal:
    """Enclose the sum of ``values``, each already carrying ``value_err``
    relative representation error (e.g. ``UNIT_ROUNDOFF`` for correctly
    rounded reciprocals).

    ``math.fsum`` is correctly rounded, so its own contribution is half an ulp.
    """
    vals = list(values)
    s = math.fsum(vals)
    rep = math.fsum(abs(v) for v in vals) * value_err * (1 + 2 ** -40)
    err = rep + abs(s) * UNIT_ROUNDOFF
    return CertifiedReal(down(s - err), up(s + err))


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free transformation: ``a + b == s + t`` exactly."""
    s = a + b
    bb = s - a
    t = (a - (s - bb)) + (b - bb)
    return s, t
