"""Certified prefix/suffix quantities over the primes of a radical."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .certified import UNIT_ROUNDOFF, CertifiedReal, certified_fsum
from .errors import IndeterminateError
from .radical import EXACT_K_MAX, Radical

EXACT_TAIL_MAX = 2000


@dataclass(frozen=True)
class TailSums:
    """``sig[i]`` encloses sum_{j>=i} 1/q_j and ``nlp[i]`` encloses
    -sum_{j<i} log(1 - 1/q_j) (0-based positions, i = 0..k)."""

    sig_mid: np.ndarray
    sig_err: np.ndarray
    nlp_mid: np.ndarray
    nlp_err: np.ndarray
    exact_sig: tuple | None = None
    exact_pi: tuple | None = None

    def sigma_suffix(self, i: int) -> CertifiedReal:
        if self.exact_sig is not None:
            return CertifiedReal.from_fraction(self.exact_sig[i])
        return CertifiedReal.around(float(self.sig_mid[i]), float(self.sig_err[i]))

    def pi_prefix(self, i: int) -> CertifiedReal:
        """Enclosure of prod_{j<i} (1 - 1/q_j)."""
        if self.exact_pi is not None:
            return CertifiedReal.from_fraction(self.exact_pi[i])
        nlp = CertifiedReal.around(float(self.nlp_mid[i]), float(self.nlp_err[i]))
        return (-nlp).exp()


def _cum_with_error(values: np.ndarray, rel_err: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Running sums s_i = sum_{j<i} values_j (i = 0..len) with rigorous error radii.

    Each input carries absolute error ``rel_err``; every addition of the
    cumulative sum rounds by at most u*|s_i|.
    """
    s = np.concatenate(([0.0], np.cumsum(values)))
    e = np.concatenate(([0.0], np.cumsum(rel_err))) + UNIT_ROUNDOFF * np.concatenate(([0.0], np.cumsum(np.abs(s[1:]))))
    return s, e * (1 + 2.0 ** -30)


def tail_sums(rad: Radical) -> TailSums:
    cache = rad.__dict__.get("_tails")
    if cache is not None:
        return cache
    k = rad.k
    if k <= EXACT_K_MAX:
        sig = [Fraction(0)] * (k + 1)
        for i in range(k - 1, -1, -1):
            sig[i] = sig[i + 1] + Fraction(1, rad.primes[i])
        pi = [Fraction(1)] * (k + 1)
        for i, q in enumerate(rad.primes):
            pi[i + 1] = pi[i] * Fraction(q - 1, q)
        out = TailSums(None, None, None, None, tuple(sig), tuple(pi))
    else:
        r = 1.0 / rad.array.astype(np.float64)
        rev = r[::-1]
        s, e = _cum_with_error(rev, UNIT_ROUNDOFF * rev)
        sig_mid, sig_err = s[::-1].copy(), e[::-1].copy()
        terms = -np.log1p(-r)
        n_mid, n_err = _cum_with_error(terms, 4 * UNIT_ROUNDOFF * (terms + r))
        out = TailSums(sig_mid, sig_err, n_mid, n_err)
    rad.__dict__["_tails"] = out
    return out


def _tail_exact_lt(rad: Radical, l0: int, rhs: Fraction) -> bool:
    """Decide sum_{j>=l0} 1/q_j < rhs by a tighter route."""
    tail = certified_fsum([1.0 / q for q in rad.primes[l0:]], UNIT_ROUNDOFF)
    r = CertifiedReal.from_fraction(rhs)
    if tail.hi < r.lo:
        return True
    if tail.lo >= r.hi:
        return False
    if rad.k - l0 <= EXACT_TAIL_MAX:
        return sum(Fraction(1, q) for q in rad.primes[l0:]) < rhs
    raise IndeterminateError(f"tail from position {l0 + 1} straddles 1 + 1/(2 q_l)")


def find_l(rad: Radical) -> tuple[int, int]:
    """Smallest l (1-based) with sum_{i>=l} 1/q_i < 1 + 1/(2 q_l); returns (l, q_l).

    The condition is monotone in l: once it holds it keeps holding, because
    dropping 1/q_l from the tail outweighs the change on the right.
    """
    t = tail_sums(rad)
    k = rad.k
    if t.exact_sig is not None:
        for i in range(k):
            if t.exact_sig[i] < 1 + Fraction(1, 2 * rad.primes[i]):
                return i + 1, rad.primes[i]
        raise AssertionError("unreachable: l = k always qualifies")
    q = rad.array.astype(np.float64)
    rhs = 1.0 + 0.5 / q
    rhs_pad = 4 * UNIT_ROUNDOFF * rhs
    lo = t.sig_mid[:k] - t.sig_err[:k]
    hi = t.sig_mid[:k] + t.sig_err[:k]
    surely_false = lo >= rhs + rhs_pad
    i = int(np.argmin(surely_false)) if not surely_false.all() else k - 1
    while i < k:
        surely_true = hi[i] < rhs[i] - rhs_pad[i]
        if surely_true or _tail_exact_lt(rad, i, 1 + Fraction(1, 2 * rad.primes[i])):
            return i + 1, rad.primes[i]
        i += 1
    raise AssertionError("unreachable: l = k always qualifies")
