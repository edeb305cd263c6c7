"""Exact identities linking prime counts between consecutive squares to
counts on doubled intervals.

For every n >= 1, with S = signed_carry_sum(n**2, 2n, pi(n)):

    pi((n+1)**2) - pi(n**2) = pi(2n) - pi(n) + 1 - S

The left side is the gap whose positivity is the open between-squares
question; pi(2n) - pi(n) >= 1 is guaranteed, so the gap is >= 1 exactly when
S <= pi(2n) - pi(n). Each record here evaluates both sides from scratch and
states whether they agree.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import time
from dataclasses import dataclass

from .carrysum import (
    ConsistencyError,
    multiple_count,
    signed_carry_sum_naive,
    signed_carry_sum_stats,
)
from .legendre import PhiCache, pi_via_legendre
from .primes import OutOfRangeError, PrimeTable, sieve_primes

ENGINES = ("sieve", "legendre", "both")
WORKERS_ENV = "LEGENDREGAP_WORKERS"
DEFAULT_SHADOW_THRESHOLD = 15
_SHADOW_MAX = 20
_PARALLEL_MIN_SPAN = 512


@dataclass(frozen=True)
class IdentityRecord:
    """All counts entering the identity at one n, plus both sides of it."""

    n: int
    pi_n2: int
    pi_next2: int
    pi_n: int
    pi_2n: int
    phi_t: int
    lhs: int
    rhs: int
    holds: bool
    oracle_path: str

    @classmethod
    def from_counts(
        cls,
        n: int,
        pi_n2: int,
        pi_next2: int,
        pi_n: int,
        pi_2n: int,
        phi_t: int,
        oracle_path: str,
    ) -> "IdentityRecord":
        lhs = pi_next2 - pi_n2
        rhs = pi_2n - pi_n + 1 - phi_t
        return cls(
            n=n,
            pi_n2=pi_n2,
            pi_next2=pi_next2,
            pi_n=pi_n,
            pi_2n=pi_2n,
            phi_t=phi_t,
            lhs=lhs,
            rhs=rhs,
            holds=lhs == rhs,
            oracle_path=oracle_path,
        )


@dataclass(frozen=True)
class SeriesPoint:
    """One row of the per-n data series."""

    n: int
    legendre_gap: int
    bertrand_count: int
    phi_t: int


@dataclass(frozen=True)
class SplitCheck:
    """Both sides of the multiple-count difference identity at one n."""

    n: int
    lhs_t: int
    rhs_t: int
    holds: bool


@dataclass(frozen=True)
class BoundCheck:
    """Equivalence between 'gap >= 1' and 'carry sum <= doubled-interval count'."""

    n: int
    gap: int
    bertrand_count: int
    phi_t: int
    gap_ge_1: bool
    bound_holds: bool
    equivalent: bool
    phi_t_le_1: bool
    implication_holds: bool


@dataclass
class RangeSummary:
    lo: int
    hi: int
    engine: str
    checked: int
    failures: list[IdentityRecord]
    records: list[IdentityRecord]
    elapsed: float
    max_terms: int
    max_terms_n: int


def required_limit(n: int, engine: str) -> int:
    """Smallest sieve limit that lets the given engine evaluate n."""
    if engine == "sieve":
        return (n + 1) ** 2
    if engine == "legendre":
        return 2 * n
    raise ValueError(f"engine must be 'sieve' or 'legendre', got {engine!r}")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _check_shadow(threshold: int) -> None:
    if not 0 <= threshold <= _SHADOW_MAX:
        raise ValueError(
            f"shadow threshold must be in [0, {_SHADOW_MAX}], got {threshold}"
        )


def _pi_counts(
    n: int, engine: str, table: PrimeTable, cache: PhiCache | None
) -> tuple[int, int, int, int]:
    """(pi(n**2), pi((n+1)**2), pi(n), pi(2n)) via the chosen engine."""
    if engine == "sieve":
        need = (n + 1) ** 2
        if table.limit < need:
            raise OutOfRangeError(
                f"sieve engine needs limit >= {need}, table stops at {table.limit}"
            )
        return table.pi(n * n), table.pi(need), table.pi(n), table.pi(2 * n)
    if table.limit < 2 * n:
        raise OutOfRangeError(
            f"legendre engine needs limit >= {2 * n}, table stops at {table.limit}"
        )
    if cache is None:
        cache = PhiCache()
    # pi((n+1)**2) equals pi(n**2 + 2n): (n+1)**2 is a square, hence composite.
    # Both arguments have isqrt = n, so primes to n suffice for the recursion.
    pi_n2 = 0 if n == 1 else pi_via_legendre(n * n, table, cache)
    pi_next2 = pi_via_legendre(n * n + 2 * n, table, cache)
    return pi_n2, pi_next2, table.pi(n), table.pi(2 * n)


def _carry_with_shadow(
    n: int, table: PrimeTable, shadow_threshold: int
) -> tuple[int, int]:
    """Carry sum for (n**2, 2n), shadow-checked by the subset oracle when
    the prime count is small enough to afford it."""
    a = table.pi(n)
    total, terms = signed_carry_sum_stats(n * n, 2 * n, a, table)
    if a <= shadow_threshold:
        ref = signed_carry_sum_naive(n * n, 2 * n, a, table)
        if ref != total:
            raise ConsistencyError(
                f"carry sum mismatch at n={n}: walk gave {total}, subsets gave {ref}"
            )
    return total, terms


def evaluate_identity(
    n: int,
    *,
    engine: str = "sieve",
    table: PrimeTable | None = None,
    cache: PhiCache | None = None,
    shadow_threshold: int = DEFAULT_SHADOW_THRESHOLD,
) -> IdentityRecord:
    """Evaluate every count in the identity at one n and compare the sides.

    engine "sieve" reads all four prime counts from the table (needs limit
    >= (n+1)**2). engine "legendre" needs the table only to 2n and rebuilds
    the two big counts through the phi recursion. The carry sum is the same
    pruned walk either way, shadow-checked against the subset oracle while
    pi(n) <= shadow_threshold.
    """
    _check_n(n)
    _check_shadow(shadow_threshold)
    if engine not in ("sieve", "legendre"):
        raise ValueError(
            f"engine must be 'sieve' or 'legendre', got {engine!r}"
        )
    if table is None:
        table = sieve_primes(required_limit(n, engine))
    counts = _pi_counts(n, engine, table, cache)
    phi_t, _ = _carry_with_shadow(n, table, shadow_threshold)
    return IdentityRecord.from_counts(n, *counts, phi_t, engine)


def evaluate_both(
    n: int,
    sieve_table: PrimeTable,
    legendre_table: PrimeTable,
    cache: PhiCache | None = None,
    shadow_threshold: int = DEFAULT_SHADOW_THRESHOLD,
) -> tuple[IdentityRecord, IdentityRecord]:
    """Evaluate with both engines; the carry sum is computed once and shared."""
    recs, _ = _evaluate_pair(n, sieve_table, legendre_table, cache, shadow_threshold)
    return recs


def _evaluate_pair(
    n: int,
    sieve_table: PrimeTable,
    legendre_table: PrimeTable,
    cache: PhiCache | None,
    shadow_threshold: int,
) -> tuple[tuple[IdentityRecord, IdentityRecord], int]:
    _check_n(n)
    _check_shadow(shadow_threshold)
    counts_s = _pi_counts(n, "sieve", sieve_table, None)
    counts_l = _pi_counts(n, "legendre", legendre_table, cache)
    phi_t, terms = _carry_with_shadow(n, legendre_table, shadow_threshold)
    rec_s = IdentityRecord.from_counts(n, *counts_s, phi_t, "sieve")
    rec_l = IdentityRecord.from_counts(n, *counts_l, phi_t, "legendre")
    return (rec_s, rec_l), terms


def _resolve_workers(workers: int | None, span: int) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        if env is not None:
            try:
                workers = int(env)
            except ValueError:
                raise ValueError(
                    f"{WORKERS_ENV} must be an integer, got {env!r}"
                ) from None
        else:
            workers = (os.cpu_count() or 1) if span >= _PARALLEL_MIN_SPAN else 1
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return min(workers, span)


def _verify_chunk(args: tuple[int, int, str, int]):
    lo, hi, engine, shadow_threshold = args
    records: list[IdentityRecord] = []
    failures: list[IdentityRecord] = []
    max_terms = 0
    max_terms_n = lo
    cache = PhiCache()
    sieve_table = (
        sieve_primes((hi + 1) ** 2) if engine in ("sieve", "both") else None
    )
    legendre_table = (
        sieve_primes(2 * hi) if engine in ("legendre", "both") else None
    )
    for n in range(lo, hi + 1):
        if engine == "both":
            (rec_s, rec_l), terms = _evaluate_pair(
                n, sieve_table, legendre_table, cache, shadow_threshold
            )
            records.extend((rec_s, rec_l))
            agree = all(
                getattr(rec_s, f) == getattr(rec_l, f)
                for f in ("pi_n2", "pi_next2", "pi_n", "pi_2n", "phi_t", "lhs", "rhs", "holds")
            )
            if not (rec_s.holds and rec_l.holds and agree):
                failures.extend((rec_s, rec_l))
        else:
            table = sieve_table if engine == "sieve" else legendre_table
            counts = _pi_counts(n, engine, table, cache)
            phi_t, terms = _carry_with_shadow(n, table, shadow_threshold)
            rec = IdentityRecord.from_counts(n, *counts, phi_t, engine)
            records.append(rec)
            if not rec.holds:
                failures.append(rec)
        if terms > max_terms:
            max_terms = terms
            max_terms_n = n
    return records, failures, max_terms, max_terms_n


def verify_range(
    lo: int,
    hi: int,
    *,
    engine: str = "sieve",
    workers: int | None = None,
    shadow_threshold: int = DEFAULT_SHADOW_THRESHOLD,
) -> RangeSummary:
    """Check the identity for every n in [lo, hi].

    engine "both" evaluates each n through both pi engines and cross-checks
    every field. The range may be split across processes (``workers`` or the
    LEGENDREGAP_WORKERS environment variable); chunks are merged in n order,
    so results are identical for any worker count.
    """
    if lo < 1:
        raise ValueError(f"range start must be >= 1, got {lo}")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    _check_shadow(shadow_threshold)
    span = hi - lo + 1
    nworkers = _resolve_workers(workers, span)
    start = time.perf_counter()
    if nworkers == 1:
        parts = [_verify_chunk((lo, hi, engine, shadow_threshold))]
    else:
        step = -(-span // nworkers)
        chunks = [
            (a, min(a + step - 1, hi), engine, shadow_threshold)
            for a in range(lo, hi + 1, step)
        ]
        methods = mp.get_all_start_methods()
        ctx = mp.get_context("fork" if "fork" in methods else None)
        with ctx.Pool(len(chunks)) as pool:
            parts = pool.map(_verify_chunk, chunks)
    records: list[IdentityRecord] = []
    failures: list[IdentityRecord] = []
    max_terms = 0
    max_terms_n = lo
    for recs, fails, mt, mtn in parts:
        records.extend(recs)
        failures.extend(fails)
        if mt > max_terms:
            max_terms, max_terms_n = mt, mtn
    elapsed = time.perf_counter() - start
    return RangeSummary(
        lo=lo,
        hi=hi,
        engine=engine,
        checked=span,
        failures=failures,
        records=records,
        elapsed=elapsed,
        max_terms=max_terms,
        max_terms_n=max_terms_n,
    )


def series(
    lo: int,
    hi: int,
    *,
    engine: str = "sieve",
    workers: int | None = None,
    shadow_threshold: int = DEFAULT_SHADOW_THRESHOLD,
) -> list[SeriesPoint]:
    """Per-n rows (n, gap between squares, count on (n, 2n], carry sum).

    Raises ConsistencyError if any n violates gap = count + 1 - carry, so a
    returned series always satisfies the identity row by row.
    """
    summary = verify_range(
        lo, hi, engine=engine, workers=workers, shadow_threshold=shadow_threshold
    )
    if summary.failures:
        bad = summary.failures[0]
        raise ConsistencyError(
            f"identity failed at n={bad.n}: lhs={bad.lhs} rhs={bad.rhs}"
        )
    wanted = "sieve" if engine == "both" else engine
    return [
        SeriesPoint(
            n=r.n,
            legendre_gap=r.lhs,
            bertrand_count=r.pi_2n - r.pi_n,
            phi_t=r.phi_t,
        )
        for r in summary.records
        if r.oracle_path == wanted
    ]


def multiple_count_split_check(
    n: int,
    table: PrimeTable | None = None,
    cache: PhiCache | None = None,
) -> SplitCheck:
    """Difference of multiple-counts across [n**2, n**2 + 2n] against the
    count on [1, 2n] plus the signed carry sum.

    The left side uses only the phi recursion, the carry part of the right
    side only the pruned walk, so agreement checks the two routes against
    each other.
    """
    _check_n(n)
    if table is None:
        table = sieve_primes(max(n, 2))
    if cache is None:
        cache = PhiCache()
    m_hi = n * n + 2 * n
    lhs = multiple_count(n, m_hi, table, cache) - multiple_count(
        n, n * n, table, cache
    )
    carry, _ = signed_carry_sum_stats(n * n, 2 * n, table.pi(n), table)
    rhs = multiple_count(n, 2 * n, table, cache) + carry
    return SplitCheck(n=n, lhs_t=lhs, rhs_t=rhs, holds=lhs == rhs)


def gap_bound_check(
    n: int,
    table: PrimeTable | None = None,
    cache: PhiCache | None = None,
    record: IdentityRecord | None = None,
) -> BoundCheck:
    """Check that 'gap >= 1' and 'carry sum <= count on (n, 2n]' agree, and
    report the stronger sufficient condition 'carry sum <= 1 implies gap >= 1'.

    Pass a precomputed record to avoid re-evaluating the counts.
    """
    if record is None:
        record = evaluate_identity(n, table=table, cache=cache)
    b = record.pi_2n - record.pi_n
    gap = record.lhs
    gap_ge_1 = gap >= 1
    bound_holds = record.phi_t <= b
    return BoundCheck(
        n=record.n,
        gap=gap,
        bertrand_count=b,
        phi_t=record.phi_t,
        gap_ge_1=gap_ge_1,
        bound_holds=bound_holds,
        equivalent=gap_ge_1 == bound_holds,
        phi_t_le_1=record.phi_t <= 1,
        implication_holds=record.phi_t > 1 or gap_ge_1,
    )
