"""Prime sieve with exact counting queries on a fixed range."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import compress
from math import isqrt

# The whole sieve lives in memory as one byte per integer, so keep a guard
# rail at desk scale. Callers that really want more can raise max_limit.
DEFAULT_MAX_LIMIT = 200_000_000


class OutOfRangeError(ValueError):
    """A query or precondition fell outside the sieved range."""


@dataclass(frozen=True)
class PrimeTable:
    """Immutable list of primes up to ``limit`` with O(log n) counting.

    Queries beyond ``limit`` raise OutOfRangeError instead of silently
    re-sieving; the caller decides how big a table it can afford.
    """

    limit: int
    primes: tuple[int, ...]

    def pi(self, x: int) -> int:
        """Exact number of primes <= x."""
        if x < 0 or x > self.limit:
            raise OutOfRangeError(
                f"pi({x}) outside sieved range [0, {self.limit}]"
            )
        return bisect_right(self.primes, x)

    def __len__(self) -> int:
        return len(self.primes)


def sieve_primes(limit: int, *, max_limit: int = DEFAULT_MAX_LIMIT) -> PrimeTable:
    """Sieve of Eratosthenes up to and including ``limit``.

    Plain boolean sieve; slice assignment does the striding in C. limit must
    be >= 1 and within the memory budget given by ``max_limit``.
    """
    if limit < 1:
        raise ValueError(f"sieve limit must be >= 1, got {limit}")
    if limit > max_limit:
        raise ValueError(
            f"sieve limit {limit} exceeds memory budget {max_limit}"
        )
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0] = 0
    if limit >= 1:
        flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start::p] = b"\x00" * ((limit - start) // p + 1)
    return PrimeTable(limit=limit, primes=tuple(compress(range(limit + 1), flags)))
