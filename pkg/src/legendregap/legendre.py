"""Legendre's counting recursion phi(x, a) and the prime-count formula built on it.

phi(x, a) is the number of integers in [1, x] divisible by none of the first
a primes. It satisfies the exact two-term recursion

    phi(x, a) = phi(x, a - 1) - phi(x // p_a, a - 1),    phi(x, 0) = x

and, with a = pi(isqrt(m)), yields pi(m) = phi(m, a) + a - 1. Everything here
is exact integer arithmetic; the only tuning knobs are cache sizes.
"""

from __future__ import annotations

import sys
from bisect import bisect_right
from math import isqrt

import numpy as np

from .primes import OutOfRangeError, PrimeTable

# Cache keys pack (x << 16) | a. After canonicalisation a <= pi(x), and
# pi(600_000) = 49_098 < 2**16, so packing stays injective for cacheable x.
_MAX_SMALL_X = 600_000
_BRUTE_LIMIT = 1_000_000
_BRUTE_LOOP_MAX = 2_048


class PhiCache:
    """Bounded memo for ``phi``.

    Only arguments with x below ``small_x_threshold`` are stored, so memory
    stays bounded while the expensive small subproblems are shared. Once
    ``max_entries`` is reached no further entries are added. Instances are
    not synchronised: confine each one to a single worker.
    """

    __slots__ = ("max_entries", "small_x_threshold", "_memo")

    def __init__(self, max_entries: int = 2_000_000, small_x_threshold: int = 100_000):
        if max_entries < 0:
            raise ValueError("max_entries must be >= 0")
        if not 0 <= small_x_threshold <= _MAX_SMALL_X:
            raise ValueError(
                f"small_x_threshold must be in [0, {_MAX_SMALL_X}]"
            )
        self.max_entries = max_entries
        self.small_x_threshold = small_x_threshold
        self._memo: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._memo)

    def clear(self) -> None:
        self._memo.clear()


def phi(x: int, a: int, table: PrimeTable, cache: PhiCache | None = None) -> int:
    """Count integers in [1, x] not divisible by any of the first ``a`` primes.

    Plain recursion with hand-unrolled closed forms for a <= 3 and a bounded
    memo; exact for every admissible pair. ``a`` may not exceed the number of
    primes in ``table``.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if a < 0 or a > len(table.primes):
        raise ValueError(
            f"a={a} needs {a} sieved primes, table has {len(table.primes)}"
        )
    if cache is None:
        cache = PhiCache()
    if a > 500:
        # recursion depth tracks a; lift the interpreter limit for deep calls
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, a + 1200))
        try:
            return _phi(x, a, table.primes, cache)
        finally:
            sys.setrecursionlimit(old)
    return _phi(x, a, table.primes, cache)


def _phi(x: int, a: int, primes: tuple[int, ...], cache: PhiCache) -> int:
    memo = cache._memo
    thr = cache.small_x_threshold
    cap = cache.max_entries

    def rec(x: int, a: int) -> int:
        if a and primes[a - 1] > x:
            # primes above x exclude nothing in [1, x]
            a = bisect_right(primes, x, 0, a)
        if a <= 3:
            if a == 0:
                return x
            if a == 1:
                return x - x // 2
            if a == 2:
                return x - x // 2 - x // 3 + x // 6
            q = x // 5
            return (x - x // 2 - x // 3 + x // 6) - (q - q // 2 - q // 3 + q // 6)
        key = -1
        if x < thr:
            key = (x << 16) | a
            v = memo.get(key)
            if v is not None:
                return v
        # t = phi(x, 3) - sum over j in [4, a] of phi(x // p_j, j - 1)
        q5 = x // 5
        t = (x - x // 2 - x // 3 + x // 6) - (q5 - q5 // 2 - q5 // 3 + q5 // 6)
        for j in range(a, 4, -1):
            q = x // primes[j - 1]
            b = j - 1
            if primes[b - 1] > q:
                b = bisect_right(primes, q, 0, b)
            if b <= 3:
                if b == 0:
                    v = q
                elif b == 1:
                    v = q - q // 2
                elif b == 2:
                    v = q - q // 2 - q // 3 + q // 6
                else:
                    q2 = q // 5
                    v = (q - q // 2 - q // 3 + q // 6) - (
                        q2 - q2 // 2 - q2 // 3 + q2 // 6
                    )
            elif q < thr:
                k2 = (q << 16) | b
                v = memo.get(k2)
                if v is None:
                    v = rec(q, b)
            else:
                v = rec(q, b)
            t -= v
        # j == 4 peels p_4 = 7: subtract phi(x // 7, 3) in closed form
        q = x // 7
        q2 = q // 5
        t -= (q - q // 2 - q // 3 + q // 6) - (q2 - q2 // 2 - q2 // 3 + q2 // 6)
        if key >= 0 and len(memo) < cap:
            memo[key] = t
        return t

    return rec(x, a)


def phi_bruteforce(x: int, a: int, table: PrimeTable) -> int:
    """Oracle for ``phi``: test every m in [1, x] against the first a primes.

    Small x are checked one m at a time; larger x mark multiples of each
    prime in a boolean array, which performs the same divisibility tests in
    bulk. Guarded to x <= 10**6 because the cost is proportional to x.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x > _BRUTE_LIMIT:
        raise ValueError(f"bruteforce guard: x={x} exceeds {_BRUTE_LIMIT}")
    if a < 0 or a > len(table.primes):
        raise ValueError(
            f"a={a} needs {a} sieved primes, table has {len(table.primes)}"
        )
    ps = table.primes[:a]
    if x <= _BRUTE_LOOP_MAX:
        return sum(1 for m in range(1, x + 1) if all(m % p for p in ps))
    alive = np.ones(x + 1, dtype=bool)
    alive[0] = False
    for p in ps:
        alive[p::p] = False
    return int(alive.sum())


def pi_via_legendre(m: int, table: PrimeTable, cache: PhiCache | None = None) -> int:
    """pi(m) computed as phi(m, pi(isqrt(m))) + pi(isqrt(m)) - 1.

    Needs primes only up to isqrt(m), so the table can be far smaller than m.
    Raises OutOfRangeError when the table does not reach isqrt(m).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    r = _checked_isqrt(m)
    if r > table.limit:
        raise OutOfRangeError(
            f"pi_via_legendre({m}) needs primes to {r}, table stops at {table.limit}"
        )
    a = table.pi(r)
    if cache is None:
        cache = PhiCache()
    return _phi(m, a, table.primes, cache) + a - 1


def _checked_isqrt(n: int) -> int:
    r = isqrt(n)
    if not r * r <= n < (r + 1) * (r + 1):
        raise ArithmeticError(f"integer sqrt failed for {n}")
    return r
