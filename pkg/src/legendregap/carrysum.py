"""Signed carry sums over squarefree smooth moduli.

For a modulus beta built from distinct small primes, the quantity
((m1 % beta) + (m2 % beta)) // beta is 0 or 1: a carry. Summing carries over
every squarefree product of the first a primes, with sign +1 for an odd
number of factors and -1 for an even number, gives the correction term that
links the prime count between consecutive squares to the count on (n, 2n]
(see identity.py). Only moduli beta <= m1 + m2 can carry, which turns the
2**a subset sum into a walk over the squarefree smooth numbers up to m1 + m2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import prod
from typing import Iterator

import numpy as np

from .legendre import PhiCache, phi
from .primes import OutOfRangeError, PrimeTable

_NAIVE_MAX_PRIMES = 20
# below these the plain Python walk beats numpy call overhead
_BATCH_MIN_BOUND = 4_096
_BATCH_MIN_PRIMES = 8
# keep vectorised arithmetic clear of int64 overflow
_INT64_SAFE = 2**62


class ConsistencyError(ArithmeticError):
    """Two routes that must agree produced different values."""


@dataclass(frozen=True)
class SquarefreeTerm:
    """One modulus in the signed sum: beta = product of k distinct primes."""

    beta: int
    k: int
    factors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.k != len(self.factors):
            raise ValueError("k must equal the number of factors and be >= 1")
        if any(p >= q for p, q in zip(self.factors, self.factors[1:])):
            raise ValueError("factors must be strictly increasing")
        if prod(self.factors) != self.beta:
            raise ValueError(f"beta {self.beta} != product of {self.factors}")

    @property
    def sign(self) -> int:
        """+1 for odd k, -1 for even k."""
        return 1 if self.k % 2 else -1


@dataclass(frozen=True)
class BreakdownEntry:
    term: SquarefreeTerm
    r1: int
    r2: int
    carry: int
    signed: int


@dataclass(frozen=True)
class TermBreakdown:
    """Full carry table for m1 = n**2, m2 = 2n, in hand-calculation order."""

    n: int
    m1: int
    m2: int
    terms: tuple[BreakdownEntry, ...]
    total: int


def residue(value: int, modulus: int) -> int:
    """value mod modulus with validated arguments."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    if value < 0:
        raise ValueError(f"value must be >= 0, got {value}")
    return value % modulus


def carry_term(m1: int, m2: int, modulus: int) -> int:
    """1 when the residues of m1 and m2 overflow the modulus when added, else 0."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    if m1 < 0 or m2 < 0:
        raise ValueError("m1 and m2 must be >= 0")
    return ((m1 % modulus) + (m2 % modulus)) // modulus


def _check_num_primes(num_primes: int, table: PrimeTable) -> None:
    if num_primes < 0 or num_primes > len(table.primes):
        raise ValueError(
            f"num_primes={num_primes} needs {num_primes} sieved primes, "
            f"table has {len(table.primes)}"
        )


def enumerate_squarefree_terms(
    num_primes: int, bound: int, table: PrimeTable
) -> Iterator[SquarefreeTerm]:
    """Yield each squarefree product of distinct primes among the first
    ``num_primes`` with value <= bound, exactly once.

    Depth-first over prime indices in increasing order; a partial product is
    extended only while it stays within bound (checked by division, so the
    product is never formed past the bound), and since primes increase the
    scan of extensions stops at the first prime that no longer fits.
    """
    _check_num_primes(num_primes, table)
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    ps = table.primes[:num_primes]

    def walk(prefix: int, factors: tuple[int, ...], start: int):
        for j in range(start, num_primes):
            p = ps[j]
            if p > bound // prefix:
                break
            beta = prefix * p
            fac = factors + (p,)
            yield SquarefreeTerm(beta=beta, k=len(fac), factors=fac)
            yield from walk(beta, fac, j + 1)

    yield from walk(1, (), 0)


def _carry_walk(
    m1: int, m2: int, num_primes: int, ps: tuple[int, ...], bound: int
) -> tuple[int, int]:
    """Pruned depth-first signed carry total. Plain ints, so width is unbounded."""
    total = 0
    terms = 0

    def walk(prefix: int, start: int, sign: int) -> None:
        nonlocal total, terms
        for j in range(start, num_primes):
            p = ps[j]
            if p > bound // prefix:
                break
            beta = prefix * p
            terms += 1
            r2 = m2 % beta
            if m1 % beta >= beta - r2:
                total += sign
            walk(beta, j + 1, -sign)

    walk(1, 0, 1)
    return total, terms


def _carry_batch(
    m1: int, m2: int, num_primes: int, ps: tuple[int, ...], bound: int
) -> tuple[int, int]:
    """Level-order expansion of the same pruned term set, vectorised.

    Level k holds every surviving product of k distinct primes; children are
    formed by appending a larger prime while the product stays within bound.
    Argument ranges must fit int64 (the caller guards this).
    """
    primes_arr = np.asarray(ps, dtype=np.int64)
    width = int(np.searchsorted(primes_arr, bound, side="right"))
    prod_lvl = primes_arr[:width].copy()
    idx = np.arange(width, dtype=np.int64)
    total = 0
    terms = 0
    sign = 1
    while prod_lvl.size:
        terms += int(prod_lvl.size)
        r2 = m2 % prod_lvl
        total += sign * int(np.count_nonzero(m1 % prod_lvl >= prod_lvl - r2))
        cap = bound // prod_lvl
        hi = np.searchsorted(primes_arr, cap, side="right")
        lo = idx + 1
        cnt = np.maximum(hi - lo, 0)
        n_children = int(cnt.sum())
        if not n_children:
            break
        parent = np.repeat(np.arange(prod_lvl.size), cnt)
        starts = np.cumsum(cnt) - cnt
        offsets = np.arange(n_children, dtype=np.int64) - np.repeat(starts, cnt)
        child_idx = lo[parent] + offsets
        prod_lvl = prod_lvl[parent] * primes_arr[child_idx]
        idx = child_idx
        sign = -sign
    return total, terms


def _signed_carry_sum(
    m1: int, m2: int, num_primes: int, table: PrimeTable
) -> tuple[int, int]:
    if m1 < 0 or m2 < 0:
        raise ValueError("m1 and m2 must be >= 0")
    _check_num_primes(num_primes, table)
    bound = m1 + m2
    if num_primes == 0 or bound < 2:
        return 0, 0
    ps = table.primes[:num_primes]
    if (
        bound < _BATCH_MIN_BOUND
        or num_primes <= _BATCH_MIN_PRIMES
        or bound >= _INT64_SAFE
    ):
        return _carry_walk(m1, m2, num_primes, ps, bound)
    return _carry_batch(m1, m2, num_primes, ps, bound)


def signed_carry_sum(m1: int, m2: int, num_primes: int, table: PrimeTable) -> int:
    """Signed sum of carry_term(m1, m2, beta) over every squarefree product
    beta of distinct primes among the first ``num_primes``.

    Terms with beta > m1 + m2 cannot carry, so the walk is pruned there; the
    result equals the full subset sum (see signed_carry_sum_naive). May be
    negative.
    """
    return _signed_carry_sum(m1, m2, num_primes, table)[0]


def signed_carry_sum_stats(
    m1: int, m2: int, num_primes: int, table: PrimeTable
) -> tuple[int, int]:
    """Like signed_carry_sum but also reports how many terms were visited."""
    return _signed_carry_sum(m1, m2, num_primes, table)


def signed_carry_sum_naive(
    m1: int, m2: int, num_primes: int, table: PrimeTable
) -> int:
    """Exhaustive oracle: iterate all 2**num_primes - 1 nonempty subsets.

    Arbitrary-precision arithmetic throughout, no pruning. Guarded to
    num_primes <= 20 so the cost stays bounded.
    """
    if num_primes > _NAIVE_MAX_PRIMES:
        raise ValueError(
            f"naive oracle guard: num_primes={num_primes} exceeds {_NAIVE_MAX_PRIMES}"
        )
    if m1 < 0 or m2 < 0:
        raise ValueError("m1 and m2 must be >= 0")
    _check_num_primes(num_primes, table)
    ps = table.primes[:num_primes]
    total = 0
    for k in range(1, num_primes + 1):
        sign = 1 if k % 2 else -1
        for combo in combinations(ps, k):
            beta = prod(combo)
            total += sign * (((m1 % beta) + (m2 % beta)) // beta)
    return total


def signed_floor_sum(m: int, num_primes: int, table: PrimeTable) -> int:
    """Signed sum of m // beta over the same squarefree moduli (bound = m).

    Expands m - phi(m, num_primes) by inclusion-exclusion; moduli above m
    contribute nothing, so the walk is pruned at m.
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    _check_num_primes(num_primes, table)
    if num_primes == 0 or m < 2:
        return 0
    ps = table.primes[:num_primes]
    if m < _BATCH_MIN_BOUND or num_primes <= _BATCH_MIN_PRIMES or m >= _INT64_SAFE:
        total = 0

        def walk(prefix: int, start: int, sign: int) -> None:
            nonlocal total
            for j in range(start, num_primes):
                p = ps[j]
                if p > m // prefix:
                    break
                beta = prefix * p
                total += sign * (m // beta)
                walk(beta, j + 1, -sign)

        walk(1, 0, 1)
        return total
    primes_arr = np.asarray(ps, dtype=np.int64)
    width = int(np.searchsorted(primes_arr, m, side="right"))
    prod_lvl = primes_arr[:width].copy()
    idx = np.arange(width, dtype=np.int64)
    total = 0
    sign = 1
    while prod_lvl.size:
        total += sign * int((m // prod_lvl).sum())
        cap = m // prod_lvl
        hi = np.searchsorted(primes_arr, cap, side="right")
        lo = idx + 1
        cnt = np.maximum(hi - lo, 0)
        n_children = int(cnt.sum())
        if not n_children:
            break
        parent = np.repeat(np.arange(prod_lvl.size), cnt)
        starts = np.cumsum(cnt) - cnt
        offsets = np.arange(n_children, dtype=np.int64) - np.repeat(starts, cnt)
        child_idx = lo[parent] + offsets
        prod_lvl = prod_lvl[parent] * primes_arr[child_idx]
        idx = child_idx
        sign = -sign
    return total


def multiple_count(
    sqrt_n: int,
    m: int,
    table: PrimeTable,
    cache: PhiCache | None = None,
    *,
    check_range: bool = True,
) -> int:
    """Count of integers in [1, m] divisible by at least one prime <= sqrt_n.

    Computed as m - phi(m, pi(sqrt_n)). The admissible window
    sqrt_n <= m < (sqrt_n + 1)**2 is checked by default; pass
    check_range=False to evaluate outside it (the formula stays exact).
    """
    if sqrt_n < 1:
        raise ValueError(f"sqrt_n must be >= 1, got {sqrt_n}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if check_range and not sqrt_n <= m < (sqrt_n + 1) ** 2:
        raise OutOfRangeError(
            f"m={m} outside [{sqrt_n}, {(sqrt_n + 1) ** 2}); "
            "pass check_range=False to evaluate anyway"
        )
    return m - phi(m, table.pi(sqrt_n), table, cache)


def carry_breakdown(n: int, table: PrimeTable) -> TermBreakdown:
    """Per-modulus carry table for m1 = n**2, m2 = 2n.

    Terms are ordered by subset size, then by factor list, the order a hand
    calculation would use. The total is cross-checked against
    signed_carry_sum before returning.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = table.pi(n)
    m1, m2 = n * n, 2 * n
    ordered = sorted(
        enumerate_squarefree_terms(a, m1 + m2, table),
        key=lambda t: (t.k, t.factors),
    )
    entries = []
    total = 0
    for t in ordered:
        r1 = m1 % t.beta
        r2 = m2 % t.beta
        carry = (r1 + r2) // t.beta
        signed = t.sign * carry
        total += signed
        entries.append(
            BreakdownEntry(term=t, r1=r1, r2=r2, carry=carry, signed=signed)
        )
    check = signed_carry_sum(m1, m2, a, table)
    if check != total:
        raise ConsistencyError(
            f"breakdown total {total} disagrees with carry sum {check} at n={n}"
        )
    return TermBreakdown(n=n, m1=m1, m2=m2, terms=tuple(entries), total=total)
