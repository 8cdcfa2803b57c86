"""Exact integer and modular arithmetic primitives.

Jacobi symbols, deterministic primality, prime search in arithmetic
progressions, Chinese-remainder combination, and q-th power residue
tests.  Everything is pure and exact; no floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

DEFAULT_SEARCH_LIMIT = 10**6

# Miller-Rabin with these witnesses is a proven-deterministic primality
# test for all n below this bound (Sorenson & Webster, 2015).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1; the Legendre symbol when n is prime."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol requires odd positive n, got n={n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality for arbitrary integers; n <= 1 is not prime."""
    if n <= 1:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _MR_PROVEN_BOUND:
        return _miller_rabin(n, _MR_WITNESSES)
    # Outside the proven witness range fall back to trial division.  Exact,
    # slow, and unreachable for the moduli this library actually handles.
    f = 41
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _miller_rabin(n: int, witnesses: Sequence[int]) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> Iterator[int]:
    """Yield the primes p with lo <= p <= hi in increasing order."""
    n = max(lo, 2)
    if n <= 2 <= hi:
        yield 2
        n = 3
    if n % 2 == 0:
        n += 1
    while n <= hi:
        if is_prime(n):
            yield n
        n += 2


def crt_combine(pairs: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r (mod m) with pairwise coprime moduli.

    Returns (residue, modulus) with 0 <= residue < modulus = product of
    the input moduli.  Non-coprime moduli are rejected.
    """
    if not pairs:
        raise ValueError("crt_combine needs at least one congruence")
    residue, modulus = 0, 1
    for r, m in pairs:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        if math.gcd(modulus, m) != 1:
            raise ValueError(f"moduli are not pairwise coprime: gcd includes {math.gcd(modulus, m)}")
        # x = residue (mod modulus), x = r (mod m)
        inv = pow(modulus, -1, m)
        t = ((r - residue) * inv) % m
        residue += modulus * t
        modulus *= m
    return residue % modulus, modulus


def _merge_congruences(pairs: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Like crt_combine but allows compatible non-coprime moduli.

    Raises ValueError when the system is contradictory.
    """
    residue, modulus = 0, 1
    for r, m in pairs:
        g = math.gcd(modulus, m)
        if (r - residue) % g != 0:
            raise ValueError(f"contradictory congruences: x={residue} (mod {modulus}) vs x={r} (mod {m})")
        lcm = modulus // g * m
        t = ((r - residue) // g * pow(modulus // g, -1, m // g)) % (m // g)
        residue = (residue + modulus * t) % lcm
        modulus = lcm
    return residue, modulus


@dataclass(frozen=True)
class PrimeSearchSpec:
    """A bounded search for primes in an intersection of arithmetic progressions.

    ``residue_conditions`` lists (residue, modulus) pairs the prime must
    satisfy; each residue must be coprime to its modulus, otherwise the
    progression contains at most one prime.  ``extra_predicate`` is an
    arbitrary additional test on the candidate prime, with
    ``predicate_name`` carried along for reporting.
    """

    residue_conditions: tuple[tuple[int, int], ...] = ()
    lower_bound: int = 1
    extra_predicate: Optional[Callable[[int], bool]] = None
    predicate_name: str = ""
    search_limit: int = DEFAULT_SEARCH_LIMIT

    def __post_init__(self) -> None:
        conditions = tuple((int(r), int(n)) for r, n in self.residue_conditions)
        object.__setattr__(self, "residue_conditions", conditions)
        for r, n in conditions:
            if n < 2:
                raise ValueError(f"residue condition modulus must be >= 2, got {n}")
            if math.gcd(r, n) != 1:
                raise ValueError(f"residue {r} is not coprime to modulus {n}")
        if self.lower_bound >= self.search_limit:
            raise ValueError(
                f"lower_bound {self.lower_bound} must be below search_limit {self.search_limit}"
            )


@dataclass(frozen=True)
class PrimeSearchResult:
    """Primes found by find_primes, with an explicit shortfall marker."""

    primes: tuple[int, ...]
    requested: int
    shortfall: bool
    search_limit: int

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)


def find_primes(spec: PrimeSearchSpec, count: int) -> PrimeSearchResult:
    """The ``count`` smallest primes matching ``spec``, in increasing order.

    Stops at ``spec.search_limit``; if fewer than ``count`` primes exist
    below the limit the result carries ``shortfall=True`` rather than
    raising.  Contradictory residue conditions raise ValueError.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    residue, step = _merge_congruences(spec.residue_conditions)
    found: list[int] = []
    c = max(spec.lower_bound + 1, 2)
    c += (residue - c) % step
    while c <= spec.search_limit and len(found) < count:
        if is_prime(c) and (spec.extra_predicate is None or spec.extra_predicate(c)):
            found.append(c)
        c += step
    return PrimeSearchResult(
        primes=tuple(found),
        requested=count,
        shortfall=len(found) < count,
        search_limit=spec.search_limit,
    )


def is_qth_power_residue(a: int, q: int, p: int) -> bool:
    """Whether a is a q-th power mod p, for primes q, p with q | p-1.

    Equivalent to a^((p-1)/q) = 1 (mod p).  When a is not a q-th power
    residue, the binomial x^q - a has no root mod p and is irreducible
    over the p-element field (degree-q binomial criterion for q | p-1).
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if (p - 1) % q != 0:
        raise ValueError(f"q={q} does not divide p-1={p - 1}")
    if math.gcd(a, p) != 1:
        raise ValueError(f"a={a} is not coprime to p={p}")
    return pow(a, (p - 1) // q, p) == 1


def nth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0 (exact integer arithmetic)."""
    if n < 0:
        raise ValueError("nth_root requires n >= 0")
    if k < 1:
        raise ValueError("nth_root requires k >= 1")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_perfect_kth_power(a: int, k: int) -> bool:
    """Whether a = x^k for some integer x; negative a allowed for odd k."""
    if a < 0:
        if k % 2 == 0:
            return False
        return is_perfect_kth_power(-a, k)
    r = nth_root(a, k)
    return r**k == a
