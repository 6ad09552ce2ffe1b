import math

import pytest
from hypothesis import given, settings, strategies as st

from jacobsthal.errors import CapacityError, DomainError
from jacobsthal.exact import (
    asymptotic_lower_value,
    crt_solve,
    crt_witness,
    factor_tables,
    g_exact,
    g_naive,
    g_table,
    westzynthius_lower,
)
from jacobsthal.radical import Radical, is_prime

PRIMORIAL_G = {1: 2, 2: 4, 3: 6, 4: 10, 5: 14, 6: 22, 7: 26, 8: 34}
SMALL_PRIMES = [p for p in range(2, 60) if is_prime(p)]


def brute_g(n):
    """Longest run of nontotatives plus one, over one period."""
    best = run = 0
    for x in range(1, 2 * n + 1):
        run = run + 1 if math.gcd(x, n) > 1 else 0
        best = max(best, run)
    return best + 1


@pytest.mark.parametrize("k, g", sorted(PRIMORIAL_G.items()))
def test_primorial_values(k, g):
    res = g_exact(Radical.primorial(k))
    assert res.g == g and res.L == g - 1
    if k <= 7:
        assert g_naive(Radical.primorial(k)) == g


def test_small_examples():
    assert g_exact(Radical.of([2])).g == 2
    assert g_exact(Radical.of([7, 11, 13])).g == 4
    # totatives of 15: 1 2 4 7 8 11 13 14, so the widest gap is 3
    assert g_exact(Radical.of([3, 5])).g == 3
    assert g_naive(15) == 3
    r = g_exact(Radical.of([2, 3, 5]))
    assert (r.a, r.b) == (1, 2)


def test_a_b_conventions():
    r = g_exact(Radical.of([7]))
    assert (r.g, r.a, r.b) == (2, 6, 1)
    for k in range(2, 8):
        res = g_exact(Radical.primorial(k))
        assert res.a < Radical.primorial(k).n / 2
        assert res.b >= 1


@given(st.lists(st.sampled_from(SMALL_PRIMES), min_size=1, max_size=4, unique=True))
@settings(max_examples=150, deadline=None)
def test_scan_matches_brute_force(primes):
    r = Radical.of(primes)
    if r.n > 200_000:
        return
    assert g_exact(r).g == brute_g(r.n) == g_naive(r)


def test_segmented_path_and_threads():
    # P_8 exceeds the single-pass size and goes through the segmented scan
    r = Radical.primorial(8)
    one = g_exact(r, threads=1)
    four = g_exact(r, threads=4)
    assert one == four
    assert one.g == 34
    r = Radical.of([3, 5, 7, 11, 13, 17, 19])
    assert g_exact(r, threads=1) == g_exact(r, threads=3)
    assert g_exact(r).g == g_naive(r)


def test_budgets():
    with pytest.raises(CapacityError):
        g_exact(Radical.primorial(8), budget=10**6)
    with pytest.raises(CapacityError):
        g_naive(Radical.primorial(9))
    with pytest.raises(DomainError):
        g_naive(1)


def test_g_table_against_naive():
    g = g_table(3000)
    _, _, sqf = factor_tables(3000)
    for n in range(2, 3001):
        if sqf[n]:
            assert g[n] == g_naive(n), n
    assert g[1] == 1 and g[4] == 0


def test_factor_tables():
    spf, lpf, sqf = factor_tables(100)
    assert spf[91] == 7 and lpf[91] == 13
    assert not sqf[12] and sqf[30] and not sqf[0]


def test_crt():
    x, m = crt_solve([2, 3], [3, 5])
    assert (x, m) == (8, 15)


def test_witness_examples():
    w = crt_witness(Radical.of([3, 5]))
    assert w.start == 8 and w.length == 2 and w.validate()
    w = crt_witness(Radical.of([2, 3]), [2, 1])
    assert w.validate()
    with pytest.raises(DomainError):
        crt_witness(Radical.of([2, 3]), [1, 1])


@given(st.lists(st.sampled_from(SMALL_PRIMES), min_size=1, max_size=7, unique=True), st.randoms())
@settings(max_examples=100, deadline=None)
def test_witness_property(primes, rnd):
    r = Radical.of(primes)
    perm = list(range(1, r.k + 1))
    rnd.shuffle(perm)
    w = crt_witness(r, perm)
    assert 1 <= w.start <= r.n
    assert w.validate()


def test_westzynthius_lower():
    for k in range(2, 9):
        assert westzynthius_lower(k) <= PRIMORIAL_G[k]
    with pytest.raises(DomainError):
        westzynthius_lower(1)


def test_asymptotic_formula():
    v = asymptotic_lower_value(10, 0.5)
    assert v > 0
    assert asymptotic_lower_value(10, 1.0) == 0.0
    with pytest.raises(DomainError):
        asymptotic_lower_value(6, 0.5)  # logloglog 13 < 0
    with pytest.raises(DomainError):
        asymptotic_lower_value(10, 0.0)
