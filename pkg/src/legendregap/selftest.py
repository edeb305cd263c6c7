"""Built-in cross-checks, one suite per trust boundary.

Every computed quantity in the package has at least one independent route:
sieving vs trial division, the phi recursion vs a direct coprime count, the
pruned carry walk vs the exhaustive subset sum, the vectorised walk vs the
recursive one, and the identity itself on two prime-counting engines. Each
suite compares two such routes on fixed plus seeded-random inputs, so a run
is deterministic. The hidden fault-injection switch flips one comparison to
prove failures are actually caught.
"""

from __future__ import annotations

import random
import sys
import time
from math import isqrt

from .carrysum import (
    _carry_batch,
    _carry_walk,
    carry_term,
    enumerate_squarefree_terms,
    signed_carry_sum,
    signed_carry_sum_naive,
    signed_carry_sum_stats,
)
from .identity import (
    evaluate_identity,
    gap_bound_check,
    multiple_count_split_check,
    verify_range,
)
from .legendre import PhiCache, phi, phi_bruteforce, pi_via_legendre
from .primes import sieve_primes

_SEED = 20260817

# classic reference values, checked against any published table
_PI_KNOWN = {10: 4, 100: 25, 1_000: 168, 10_000: 1229, 100_000: 9592}
_PI_KNOWN_FULL = {1_000_000: 78_498}


def _is_prime_trial(m: int) -> bool:
    if m < 2:
        return False
    for d in range(2, isqrt(m) + 1):
        if m % d == 0:
            return False
    return True


def run_selftest(
    *,
    quick: bool = False,
    verbose: bool = False,
    inject_fault: bool = False,
    out=None,
) -> bool:
    """Run every suite, print one line each, return True when all pass."""
    if out is None:
        out = sys.stdout

    def suite_sieve():
        limit = 2_000 if quick else 20_000
        table = sieve_primes(limit)
        trial = [m for m in range(2, limit + 1) if _is_prime_trial(m)]
        if list(table.primes) != trial:
            extra = set(table.primes) ^ set(trial)
            return False, f"sieve and trial division differ at {sorted(extra)[:5]}"
        return True, f"{len(trial)} primes up to {limit} match trial division"

    def suite_pi_reference():
        known = dict(_PI_KNOWN)
        if not quick:
            known.update(_PI_KNOWN_FULL)
        table = sieve_primes(max(known))
        for x, want in known.items():
            got = table.pi(x)
            if got != want:
                return False, f"pi({x}) = {got}, reference says {want}"
        return True, f"pi agrees at {len(known)} reference points"

    def suite_phi():
        xmax = 5_000 if quick else 50_000
        rng = random.Random(_SEED)
        table = sieve_primes(1_000)
        cache = PhiCache()
        cases = [
            (x, a)
            for x in (0, 1, 2, 36, 49, 100, 720)
            for a in (0, 1, 2, 3, 4, 10)
        ]
        cases += [
            (rng.randrange(xmax + 1), rng.randrange(31))
            for _ in range(60 if quick else 200)
        ]
        for x, a in cases:
            got = phi(x, a, table, cache)
            want = phi_bruteforce(x, a, table)
            if got != want:
                return False, f"phi({x}, {a}) = {got}, direct count gives {want}"
        return True, f"{len(cases)} (x, a) pairs with x <= {xmax}"

    def suite_pi_legendre():
        top = 10_000 if quick else 50_000
        rng = random.Random(_SEED + 1)
        table = sieve_primes(top)
        cache = PhiCache()
        ms = list(range(2, 301))
        ms += sorted(rng.sample(range(301, top + 1), 80 if quick else 300))
        for m in ms:
            got = pi_via_legendre(m, table, cache)
            want = table.pi(m)
            if got != want:
                return False, f"pi_via_legendre({m}) = {got}, sieve gives {want}"
        return True, f"{len(ms)} values of m up to {top} match the sieve"

    def suite_carry_subsets():
        amax = 12 if quick else 15
        rng = random.Random(_SEED + 2)
        table = sieve_primes(100)
        cases = [(36, 12, 3), (49, 14, 4), (0, 0, 5), (1, 1, 0)]
        cases += [
            (rng.randrange(200_000), rng.randrange(5_000), rng.randrange(amax + 1))
            for _ in range(40 if quick else 120)
        ]
        for i, (m1, m2, a) in enumerate(cases):
            got = signed_carry_sum(m1, m2, a, table)
            if inject_fault and i == len(cases) - 1:
                got += 1
            want = signed_carry_sum_naive(m1, m2, a, table)
            if got != want:
                return False, (
                    f"carry sum ({m1}, {m2}, a={a}): walk {got}, subsets {want}"
                )
        return True, f"{len(cases)} cases with a <= {amax} match the subset sum"

    def suite_walk_batch():
        ns = [100, 257, 300] if quick else [100, 257, 300, 501, 750]
        table = sieve_primes(max(ns))
        for n in ns:
            a = table.pi(n)
            ps = table.primes[:a]
            m1, m2 = n * n, 2 * n
            walk = _carry_walk(m1, m2, a, ps, m1 + m2)
            batch = _carry_batch(m1, m2, a, ps, m1 + m2)
            if walk != batch:
                return False, f"n={n}: recursive walk {walk}, batch walk {batch}"
        return True, f"walk and batch agree on totals and term counts at n in {ns}"

    def suite_terms():
        ns = [6, 7, 30, 100] if quick else [6, 7, 30, 100, 210, 331]
        table = sieve_primes(max(ns))
        for n in ns:
            a = table.pi(n)
            m1, m2 = n * n, 2 * n
            bound = m1 + m2
            terms = list(enumerate_squarefree_terms(a, bound, table))
            betas = [t.beta for t in terms]
            if len(set(betas)) != len(betas) or any(b > bound for b in betas):
                return False, f"n={n}: term list has duplicates or oversize moduli"
            total = sum(t.sign * carry_term(m1, m2, t.beta) for t in terms)
            want, nterms = signed_carry_sum_stats(m1, m2, a, table)
            if total != want or len(terms) != nterms:
                return False, (
                    f"n={n}: enumerated {len(terms)} terms summing {total}, "
                    f"walk reports {nterms} terms summing {want}"
                )
        return True, f"term lists at n in {ns} match walk statistics"

    def suite_identity():
        top = 150 if quick else 600
        summary = verify_range(1, top, engine="both", workers=1)
        if summary.failures:
            bad = summary.failures[0]
            return False, f"identity fails at n={bad.n}: lhs={bad.lhs} rhs={bad.rhs}"
        return True, f"identity holds for n in [1, {top}] on both engines"

    def suite_split():
        top = 60 if quick else 200
        spots = [101] if quick else [523, 1001]
        table = sieve_primes(max(spots))
        cache = PhiCache()
        for n in list(range(1, top + 1)) + spots:
            chk = multiple_count_split_check(n, table, cache)
            if not chk.holds:
                return False, f"split fails at n={n}: {chk.lhs_t} != {chk.rhs_t}"
        return True, f"difference split holds for n in [1, {top}] and n in {spots}"

    def suite_bound():
        top = 100 if quick else 300
        table = sieve_primes((top + 1) ** 2)
        cache = PhiCache()
        for n in range(1, top + 1):
            rec = evaluate_identity(n, engine="sieve", table=table, cache=cache)
            chk = gap_bound_check(n, record=rec)
            if not chk.equivalent:
                return False, (
                    f"n={n}: gap >= 1 is {chk.gap_ge_1} but carry bound is "
                    f"{chk.bound_holds}"
                )
            if not chk.implication_holds:
                return False, f"n={n}: carry sum {chk.phi_t} <= 1 yet gap {chk.gap} < 1"
        return True, f"bound equivalence holds for n in [1, {top}]"

    suites = [
        ("sieve-vs-trial", suite_sieve),
        ("pi-reference", suite_pi_reference),
        ("phi-vs-bruteforce", suite_phi),
        ("pi-legendre-vs-sieve", suite_pi_legendre),
        ("carry-vs-subsets", suite_carry_subsets),
        ("walk-vs-batch", suite_walk_batch),
        ("term-enumeration", suite_terms),
        ("identity-sweep", suite_identity),
        ("split-identity", suite_split),
        ("gap-bound", suite_bound),
    ]
    passed = 0
    for name, fn in suites:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed suite is a failed suite
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        tag = "[ok]" if ok else "[FAIL]"
        line = f"{tag} {name}: {detail}"
        if verbose:
            line += f" ({elapsed:.2f}s)"
        out.write(line + "\n")
        passed += ok
    out.write(f"selftest: {passed}/{len(suites)} passed\n")
    return passed == len(suites)
