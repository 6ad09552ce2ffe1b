"""Jacobsthal's function g(n): exact values, explicit upper bounds and their numeric checks."""
from .analysis import (
    CrossoverResult,
    SpecialSumResult,
    bound_table,
    crossover,
    find_l,
    special_sum_u,
    verify_lemma_logp,
    verify_lemma_ratio,
    verify_pi_lower,
    verify_q_l_bound,
    verify_sigma_upper,
    verify_u_threshold,
)
from .bounds import (
    SUITE_NAMES,
    BoundContext,
    BoundReport,
    BoundValue,
    best_bound,
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
from .certified import CertifiedReal
from .errors import (
    CapacityError,
    DomainError,
    FactoringTimeout,
    IndeterminateError,
    JacobsthalError,
    NotSquarefreeError,
    RadicalParseError,
)
from .exact import ScanResult, Witness, asymptotic_lower_value, crt_witness, g_exact, g_naive, g_table, westzynthius_lower
from .primes import MERTENS, PrimeTable, build_prime_table, nth_prime, prefix_recip_sum, primorial, shared_table
from .radical import Radical, mediant_T, parse_radical, pi_inv, sigma_inv, totative_count

__version__ = "0.1.0"
