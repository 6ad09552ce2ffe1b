import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jacobsthal.bounds import (
    SUITE_NAMES,
    BoundValue,
    best_bound,
    binom_sum,
    bound_addendum,
    bound_improvement,
    bound_jacobsthal_L,
    bound_jacobsthal_original,
    bound_kanold_2k,
    bound_kanold_p,
    bound_kanold_sqrt,
    bound_loglog_closed,
    bound_observation,
    bound_sigma_pi,
    bound_sigma_pi_corollary,
    bound_stevens_published,
    bound_stevens_refined,
    bound_variation,
    bound_westzynthius_sieve,
    evaluate_suite,
)
from jacobsthal.errors import DomainError
from jacobsthal.exact import g_exact
from jacobsthal.radical import Radical, is_prime, pi_inv, sigma_inv

P6 = Radical.primorial(6)
SMALL_PRIMES = [p for p in range(2, 200) if is_prime(p)]


def exact_value(rep):
    assert rep.applicable and rep.value.kind == "Exact"
    return rep.value.exact


def test_jacobsthal_original_and_L():
    assert exact_value(bound_jacobsthal_original(1)) == 3
    assert exact_value(bound_jacobsthal_original(3)) == 29
    assert exact_value(bound_jacobsthal_L(1)) == 2
    assert exact_value(bound_jacobsthal_L(3)) == 28
    assert exact_value(bound_jacobsthal_L(2)) == 9
    assert bound_jacobsthal_L(2).target == "L"
    with pytest.raises(DomainError):
        bound_jacobsthal_original(0)


@pytest.mark.parametrize("k", [1, 2, 5, 50, 255, 256, 300, 2000])
def test_jacobsthal_above_kanold(k):
    a = bound_jacobsthal_original(k).value
    b = bound_kanold_2k(k).value
    assert a.sort_key() >= b.sort_key()


def test_kanold_values():
    assert exact_value(bound_kanold_2k(4)) == 16
    rep = bound_kanold_sqrt(100)
    assert not rep.applicable and rep.advisory.exact == 1024
    big = bound_kanold_sqrt(10**6)
    assert big.advisory.kind == "Log2" and abs(big.advisory.log2 - 1000) < 1e-9
    assert big.params["claimed_k_gt_e6"]
    assert bound_kanold_2k(10**6).value.kind == "Log2"


def test_stevens_published():
    rep = bound_stevens_published(300)
    assert rep.value.kind == "Log2" and 272.5 < rep.value.log2 < 272.8
    two = bound_stevens_published(2)
    assert two.value.exact >= 2 * 2 ** (2 + 2 * math.e * math.log(2))
    with pytest.raises(DomainError):
        bound_stevens_published(1)


def test_westzynthius_sieve():
    assert exact_value(bound_westzynthius_sieve(Radical.of([2]))) == 4
    assert exact_value(bound_westzynthius_sieve(Radical.of([2, 3, 5]))) == 30
    assert exact_value(bound_westzynthius_sieve(P6)) == 334


def test_kanold_p():
    assert exact_value(bound_kanold_p(Radical.of([7, 11, 13]))) == 5
    assert exact_value(bound_kanold_p(Radical.of([2, 3]), r=0.1)) == 20
    assert not bound_kanold_p(Radical.of([2, 3, 5])).applicable
    assert not bound_kanold_p(Radical.of([2, 3]), r=0.2).applicable
    with pytest.raises(DomainError):
        bound_kanold_p(Radical.of([7, 11]), r=1.5)


def test_variation():
    assert exact_value(bound_variation(Radical.of([2, 3, 5]))) == 48
    assert exact_value(bound_variation(Radical.of([2, 3]))) == 32
    assert not bound_variation(P6).applicable
    assert not bound_variation(Radical.of([5])).applicable


def test_observation():
    assert exact_value(bound_observation(Radical.of([2, 3]), 1)) == 4
    # g(15) = 3, so the split f=2, d=15 gives 3*2 - 2 + 2
    assert exact_value(bound_observation(Radical.of([2, 3, 5]), 1)) == 6
    with pytest.raises(DomainError):
        bound_observation(Radical.of([2, 3]), 2)
    rep = bound_observation(P6)
    assert rep.params["split_m"] >= 1 and exact_value(rep) >= 22


def test_improvement():
    rep = bound_improvement(P6)
    assert not rep.applicable and rep.params["l"] == 2 and rep.advisory is not None
    big = bound_improvement(Radical.primorial(20000))
    assert big.applicable
    lo, hi = big.value.log2_bounds()
    assert 1.5 * 20000**0.45 < lo and hi < 1.5 * 20000**0.45 + 40
    assert not bound_improvement(Radical.primorial(13359)).applicable
    assert bound_improvement(Radical.primorial(13360)).applicable


def test_stevens_refined():
    rep = bound_stevens_refined(Radical.primorial(5))
    assert rep.params["s"] == 7
    assert exact_value(rep) == math.ceil(4 * math.log(11) * 31)
    assert exact_value(bound_stevens_refined(P6)) >= 22
    assert not bound_stevens_refined(Radical.primorial(4)).applicable
    other = bound_stevens_refined(Radical.of([3, 5, 7, 11, 13]))
    assert other.params["p_k_substituted"]


def test_sigma_pi():
    rep = bound_sigma_pi(P6)
    assert rep.params["s"] == 5 and rep.params["numerator"] == 62
    assert abs(rep.params["denominator_lo"] - 0.18362) < 1e-5
    assert exact_value(rep) == 338
    r30 = bound_sigma_pi(Radical.of([2, 3, 5]))
    assert r30.params["s"] == 5 and r30.params["numerator"] == 7
    assert exact_value(r30) >= 6
    assert not bound_sigma_pi(Radical.of([2, 3])).applicable
    assert not bound_sigma_pi(Radical.of([7, 11, 13]), K=3.85).applicable
    assert bound_sigma_pi(P6, K=3.81).applicable


@given(st.lists(st.sampled_from(SMALL_PRIMES), min_size=3, max_size=12, unique=True))
@settings(max_examples=100, deadline=None)
def test_sigma_pi_parameter_laws(primes):
    r = Radical.of(primes)
    s = bound_sigma_pi(r).params["s"]
    sig = float(sigma_inv(r).exact)
    assert s % 2 == 1 and s >= 1 and s <= 1 + 4 * sig + 2
    s_big = bound_sigma_pi(r, K=5.0).params["s"]
    assert s_big >= s


def test_sigma_pi_corollary():
    assert exact_value(bound_sigma_pi_corollary(P6)) >= exact_value(bound_sigma_pi(P6))
    assert bound_sigma_pi_corollary(Radical.primorial(10)).applicable
    # sigma < 1/2 forces s = 1, leaving the single term 2! * C(k+1, 1)
    rep = bound_sigma_pi_corollary(Radical.of([5, 7, 11]))
    assert rep.params["s"] == 1 and rep.params["numerator"] == 2 * 4


def test_corollary_dominates_theorem_on_samples():
    rng = random.Random(11)
    for _ in range(300):
        r = Radical.of(rng.sample(SMALL_PRIMES, rng.randint(3, 12)))
        a = bound_sigma_pi(r)
        b = bound_sigma_pi_corollary(r)
        assert b.value.sort_key() >= a.value.sort_key(), r


def test_loglog_closed():
    rep = bound_loglog_closed(3)
    assert rep.value.exact >= 3 ** (3 + 3.81 * math.log(math.log(3)))
    with pytest.raises(DomainError):
        bound_loglog_closed(2)


def test_addendum():
    m2 = bound_addendum(P6, 2)
    assert m2.value.exact == 133 and abs(m2.value.approx - 132.84) < 0.01
    auto = bound_addendum(P6)
    assert auto.params["m"] == 2
    assert 192 < bound_addendum(P6, 1).value.approx < 193
    assert 179 < bound_addendum(P6, 3).value.approx < 181
    assert exact_value(bound_addendum(Radical.of([3, 5]), 1)) >= 3
    with pytest.raises(DomainError):
        bound_addendum(P6, 6)


def test_addendum_optimum_claims_on_primorials():
    # t > 1/(3 + q_{m+1}) held on every sample; m^e < k fails only just below 2^e, 3^e and 4^e
    misses = []
    for k in list(range(2, 200)) + list(range(200, 5001, 97)):
        rad = Radical.primorial(k)
        rep = bound_addendum(rad)
        m = rep.params["m"]
        assert rep.params["t"] > 1 / (3 + rad.primes[m])
        if not m**math.e < k:
            misses.append(k)
    assert misses == [4, 5, 6, 16, 17, 18, 19, 40, 41, 42, 43]


def test_addendum_large_k_picks_candidate():
    rep = bound_addendum(Radical.primorial(200))
    assert rep.applicable and rep.value is not None


def test_best_bound():
    b = best_bound(Radical.of([2]))
    assert b.name == "exact" and b.value.exact == 2
    b = best_bound(P6, include_exact=False)
    assert b.g_value().exact <= 133
    b = best_bound(Radical.of([101, 103, 107]), include_exact=False)
    assert b.g_value().exact <= 5


def test_certified_rounding_against_exact_rationals():
    rng = random.Random(3)
    for _ in range(60):
        r = Radical.of(rng.sample(SMALL_PRIMES, rng.randint(3, 20)))
        sig, pi = sigma_inv(r).exact, pi_inv(r).exact
        assert bound_westzynthius_sieve(r).value.exact >= Fraction(2**r.k) / pi
        rep = bound_sigma_pi(r)
        s = rep.params["s"]
        exact = Fraction(binom_sum(r.k, s)) / (pi - sig ** (s + 1) / math.factorial(s + 1))
        assert rep.value.exact >= exact
        for m in range(1, r.k):
            a = bound_addendum(r, m) if 1 - (sig - sum(Fraction(1, q) for q in r.primes[:m])) > 0 else None
            if a is not None and a.applicable:
                d = r.primes[:m]
                pd = math.prod(Fraction(q - 1, q) for q in d)
                t = 1 - sum(Fraction(1, q) for q in r.primes[m:])
                assert a.value.exact >= (r.k - m + 1) * (2**m + pd) / (pd * t)


def test_suite_soundness_small_radicals():
    rng = random.Random(7)
    for _ in range(120):
        r = Radical.of(rng.sample(SMALL_PRIMES[:15], rng.randint(1, 5)))
        g = g_exact(r).g
        for rep in evaluate_suite(r):
            if rep.applicable:
                assert rep.g_value().at_least(g), (r, rep.name)


def test_report_json_shape():
    rep = bound_sigma_pi(P6)
    d = json.loads(rep.to_json())
    assert set(d) >= {"name", "applicable", "reason", "value", "params", "target"}
    assert d["value"]["kind"] == "Exact" and d["target"] == "g"
    with pytest.raises(DomainError):
        evaluate_suite(P6, ["nonsense"])
    assert [r.name for r in evaluate_suite(P6)] == list(SUITE_NAMES)


def test_bound_value_switch():
    assert BoundValue.from_int(2**256 - 1).kind == "Exact"
    v = BoundValue.from_int(2**256)
    assert v.kind == "Log2" and v.log2 >= 256
    assert v.render().startswith("2^{")
    assert BoundValue.from_fraction(Fraction(7, 2)).exact == 4


def test_binom_sum():
    assert binom_sum(5, 7) == 31
    assert binom_sum(6, 5) == 62
    assert binom_sum(10, 3) == 10 + 45 + 120
