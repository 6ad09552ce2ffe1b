import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jacobsthal.errors import CapacityError, DomainError, NotSquarefreeError, RadicalParseError
from jacobsthal.radical import Radical, is_prime, mediant_T, parse_radical, pi_inv, sigma_inv, totative_count

SMALL_PRIMES = [p for p in range(2, 400) if is_prime(p)]
radicals = st.lists(st.sampled_from(SMALL_PRIMES), min_size=1, max_size=8, unique=True).map(Radical.of)


def test_is_prime_small_and_large():
    assert [p for p in range(50) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(561)


@pytest.mark.parametrize(
    "text, primes",
    [("2,3,5", (2, 3, 5)), ("P4", (2, 3, 5, 7)), ("p1", (2,)), ("30030", (2, 3, 5, 7, 11, 13)), (" 5, 3 ", (3, 5)), ("999999999989", (999999999989,))],
)
def test_parse(text, primes):
    assert parse_radical(text).primes == primes


def test_parse_semiprime_needs_rho():
    # both factors exceed the trial-division range
    assert parse_radical(str(1000003 * 999983)).primes == (999983, 1000003)


@pytest.mark.parametrize("text, err", [("12", NotSquarefreeError), ("4,6", RadicalParseError), ("2,2", RadicalParseError), ("1", RadicalParseError), ("P0", RadicalParseError), ("abc", RadicalParseError), (str(10**13), RadicalParseError), (str(999983**2), NotSquarefreeError)])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_radical(text)


def test_radical_validation():
    with pytest.raises(DomainError):
        Radical((3, 2))
    with pytest.raises(DomainError):
        Radical((4,))
    with pytest.raises(DomainError):
        Radical(())
    with pytest.raises(DomainError):
        Radical.of([3, 3])


def test_sigma_pi_exact():
    r = Radical.of([2, 3, 5])
    assert sigma_inv(r).exact == Fraction(31, 30)
    assert pi_inv(r).exact == Fraction(4, 15)
    p6 = Radical.primorial(6)
    assert pi_inv(p6).exact == Fraction(5760, 30030)
    assert abs(float(sigma_inv(p6).exact) - 1.34402) < 1e-5


def test_large_k_enclosures_contain_exact():
    r = Radical.primorial(100)
    exact_sigma = sum(Fraction(1, q) for q in r.primes)
    exact_pi = math.prod(Fraction(q - 1, q) for q in r.primes)
    assert sigma_inv(r).exact is None
    assert sigma_inv(r).lo <= exact_sigma <= sigma_inv(r).hi
    assert pi_inv(r).lo <= exact_pi <= pi_inv(r).hi
    assert pi_inv(r).width < 1e-14


@given(radicals)
@settings(max_examples=200, deadline=None)
def test_pi_inv_is_phi_over_n(r):
    phi = math.prod(q - 1 for q in r.primes)
    assert pi_inv(r).exact == Fraction(phi, r.n)


@given(radicals, st.integers(0, 5000))
@settings(max_examples=200, deadline=None)
def test_totative_count_brute_force(r, x):
    assert totative_count(r, x) == sum(1 for y in range(1, x + 1) if math.gcd(y, r.n) == 1)


def test_totative_count_limits():
    with pytest.raises(CapacityError):
        totative_count(Radical.primorial(25), 10)
    with pytest.raises(DomainError):
        totative_count(Radical.of([2]), -1)
    assert totative_count(Radical.primorial(6), 30030) == 5760


def test_mediant_sandwich_and_extremes():
    m = mediant_T(Radical.of([2]))
    assert m.value.exact == 4
    m = mediant_T(Radical.of([2, 3, 5]))
    assert m.value.hi < 3.6
    rng = random.Random(5)
    for _ in range(200):
        r = Radical.of(rng.sample(SMALL_PRIMES, rng.randint(1, 6)))
        t = mediant_T(r)
        assert t.lower.lo <= t.value.hi and t.value.lo <= t.upper.hi
        assert math.e < t.value.lo and t.value.hi <= 4


def test_sub_and_render():
    r = Radical.primorial(10)
    assert r.sub(0, 2).primes == (2, 3)
    assert r.sub(8).primes == (23, 29)
    assert "k=10" in str(r)
    assert str(Radical.of([3, 5])) == "3,5"
    assert r.is_initial_segment()
    assert not Radical.of([3, 5]).is_initial_segment()
