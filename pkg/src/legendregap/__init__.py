"""Exact verification of a carry-sum identity for primes between squares.

For every n >= 1 the number of primes in (n**2, (n+1)**2] equals
pi(2n) - pi(n) + 1 minus a signed sum of carries over squarefree products
of the primes up to n. This package computes both sides independently
(sieve or Legendre-recursion prime counts against a pruned carry walk with
an exhaustive shadow oracle) and reports whether they agree.
"""

from .carrysum import (
    BreakdownEntry,
    ConsistencyError,
    SquarefreeTerm,
    TermBreakdown,
    carry_breakdown,
    carry_term,
    enumerate_squarefree_terms,
    multiple_count,
    residue,
    signed_carry_sum,
    signed_carry_sum_naive,
    signed_carry_sum_stats,
    signed_floor_sum,
)
from .identity import (
    ENGINES,
    BoundCheck,
    IdentityRecord,
    RangeSummary,
    SeriesPoint,
    SplitCheck,
    evaluate_both,
    evaluate_identity,
    gap_bound_check,
    multiple_count_split_check,
    required_limit,
    series,
    verify_range,
)
from .legendre import PhiCache, phi, phi_bruteforce, pi_via_legendre
from .primes import DEFAULT_MAX_LIMIT, OutOfRangeError, PrimeTable, sieve_primes
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "BreakdownEntry",
    "ConsistencyError",
    "DEFAULT_MAX_LIMIT",
    "ENGINES",
    "IdentityRecord",
    "OutOfRangeError",
    "PhiCache",
    "PrimeTable",
    "RangeSummary",
    "SeriesPoint",
    "SplitCheck",
    "SquarefreeTerm",
    "TermBreakdown",
    "carry_breakdown",
    "carry_term",
    "enumerate_squarefree_terms",
    "evaluate_both",
    "evaluate_identity",
    "gap_bound_check",
    "multiple_count",
    "multiple_count_split_check",
    "phi",
    "phi_bruteforce",
    "pi_via_legendre",
    "required_limit",
    "residue",
    "run_selftest",
    "series",
    "sieve_primes",
    "signed_carry_sum",
    "signed_carry_sum_naive",
    "signed_carry_sum_stats",
    "signed_floor_sum",
    "verify_range",
    "__version__",
]
