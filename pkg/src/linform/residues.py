"""Local solutions from quadratic residues and k-th power subgroups.

For an odd prime p the quadratic residues R_p sum and difference to all
of Z/pZ once p = 1 (mod 4) and p > 5, while 0 lands in f(R_p) exactly
when -uv is a square mod p; choosing primes where it is not gives local
solutions with |f(R_p)| = p - 1 against |s(R_p)| = |d(R_p)| = p.  The
k-th power subgroups generalize this: for p > k^4 every nonzero class is
f(h1, h2) with h1, h2 k-th powers, and excluding 0 reduces to a single
power-residue test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intsets import DIFFERENCE, SUM, LinearForm
from .modular import LocalSolution, ResidueSet, modular_image
from .numtheory import (
    DEFAULT_SEARCH_LIMIT,
    PrimeSearchSpec,
    find_primes,
    is_perfect_kth_power,
    is_prime,
    is_qth_power_residue,
    jacobi,
    nth_root,
)

# Full quadratic enumeration of a coverage report is O(|H|^2); above this
# order the report falls back to the proven p > k^4 coverage bound plus
# the zero-membership test.
FULL_ENUMERATION_ORDER_CAP = 10_000


@dataclass(frozen=True)
class PowerSubgroup:
    """The multiplicative subgroup {x^k mod p} of the nonzero classes mod p."""

    p: int
    k: int
    classes: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.classes)

    def residue_set(self) -> ResidueSet:
        return ResidueSet(self.p, self.classes)

    def __contains__(self, value: int) -> bool:
        v = value % self.p
        i = 0
        lo, hi = 0, len(self.classes)
        while lo < hi:
            i = (lo + hi) // 2
            if self.classes[i] < v:
                lo = i + 1
            elif self.classes[i] > v:
                hi = i
            else:
                return True
        return False


def power_subgroup(p: int, k: int) -> PowerSubgroup:
    """The k-th powers in the multiplicative group mod p; requires k | p-1."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if (p - 1) % k != 0:
        raise ValueError(f"k={k} does not divide p-1={p - 1}")
    classes = sorted({pow(x, k, p) for x in range(1, p)})
    if len(classes) != (p - 1) // k:
        raise RuntimeError(f"subgroup of k-th powers mod {p} has unexpected order {len(classes)}")
    return PowerSubgroup(p=p, k=k, classes=tuple(classes))


def quadratic_residues(p: int) -> PowerSubgroup:
    """The nonzero squares mod an odd prime p."""
    if p == 2:
        raise ValueError("p must be an odd prime")
    return power_subgroup(p, 2)


def qr_sum_diff_full(p: int) -> bool:
    """Check by enumeration that sums and differences of squares cover Z/pZ.

    Stated for primes p = 1 (mod 4) with p > 5; other inputs are
    rejected.  A False return would indicate an implementation bug.
    """
    if not is_prime(p) or p % 4 != 1 or p <= 5:
        raise ValueError(f"requires a prime p = 1 (mod 4) with p > 5, got {p}")
    residues = quadratic_residues(p).residue_set()
    return (
        modular_image(SUM, residues).is_full()
        and modular_image(DIFFERENCE, residues).is_full()
    )


def zero_in_f_of_qr(u: int, v: int, p: int) -> bool:
    """Whether 0 is in f(R_p) for f = ux+vy, computed by enumeration.

    Equal to jacobi(-uv, p) == 1 for every odd prime p not dividing uv.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if u % p == 0 or v % p == 0:
        raise ValueError(f"p={p} must not divide the coefficients ({u}, {v})")
    residues = quadratic_residues(p).residue_set()
    return 0 in modular_image(LinearForm((u, v)), residues).classes


@dataclass(frozen=True)
class CoverageReport:
    """Representation counts of f over a power subgroup.

    ``representation_counts[x]`` is the number of ordered pairs
    (h1, h2) in H x H with f(h1, h2) = x mod p.  The counts sum to
    |H|^2 and are constant on the multiplicative cosets of H away from 0;
    both facts are checked at construction time.
    """

    form: LinearForm
    subgroup: PowerSubgroup
    covered_nonzero: bool
    zero_covered: bool
    representation_counts: tuple[int, ...]


def coverage(form: LinearForm, subgroup: PowerSubgroup) -> CoverageReport:
    """Enumerate r(x) over H x H and report nonzero coverage and 0-membership.

    When p > k^4 the nonzero classes are guaranteed covered; a violation
    raises rather than reporting, since it would mean a broken kernel.
    """
    form._require_binary()
    p, k = subgroup.p, subgroup.k
    u, v = form.coefficients
    if u % p == 0 or v % p == 0:
        raise ValueError(f"p={p} must not divide the coefficients ({u}, {v})")
    n = subgroup.order
    if n < 2:
        raise ValueError(f"subgroup order must be >= 2, got {n}")

    h = np.asarray(subgroup.classes, dtype=np.int64)
    values = ((u % p) * h[:, None] + (v % p) * h[None, :]) % p
    counts = np.bincount(values.ravel(), minlength=p)

    total = int(counts.sum())
    if total != n * n:
        raise RuntimeError(f"representation counts sum to {total}, expected {n * n}")
    _check_coset_constancy(counts, h, p)

    covered_nonzero = bool((counts[1:] > 0).all())
    zero_covered = bool(counts[0] > 0)
    if p > k**4 and not covered_nonzero:
        raise RuntimeError(
            f"nonzero coverage guaranteed for p={p} > k^4={k**4} but enumeration disagrees"
        )
    return CoverageReport(
        form=form,
        subgroup=subgroup,
        covered_nonzero=covered_nonzero,
        zero_covered=zero_covered,
        representation_counts=tuple(int(c) for c in counts),
    )


def _check_coset_constancy(counts: np.ndarray, h: np.ndarray, p: int) -> None:
    seen = np.zeros(p, dtype=bool)
    seen[0] = True
    for x in range(1, p):
        if seen[x]:
            continue
        coset = (x * h) % p
        vals = counts[coset]
        if vals.min() != vals.max():
            raise RuntimeError(f"representation count not constant on the coset of {x} mod {p}")
        seen[coset] = True


def qr_local_solutions(
    u: int,
    v: int,
    count: int,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
) -> list[LocalSolution]:
    """Local solutions from quadratic residues, for f = ux+vy vs s or d.

    Searches for primes p = 1 (mod 4), p > 5, not dividing uv, with
    -uv a quadratic nonresidue; each yields R_p with |f(R_p)| = p - 1
    while sums and differences both cover Z/pZ (g_card = p for either
    choice of g).  Every solution is re-verified by enumeration.  Returns
    fewer than ``count`` solutions when the search limit is reached.
    """
    form = LinearForm((u, v))
    if not form.is_normalized:
        raise ValueError(f"normalized form required, got ({u}, {v})")
    if is_perfect_kth_power(abs(u * v), 2):
        raise ValueError(f"|uv| = {abs(u * v)} is a perfect square; no such primes exist")

    spec = PrimeSearchSpec(
        residue_conditions=((1, 4),),
        lower_bound=5,
        extra_predicate=lambda p: u % p != 0 and v % p != 0 and jacobi(-u * v, p) == -1,
        predicate_name=f"jacobi({-u * v}, p) = -1",
        search_limit=search_limit,
    )
    solutions = []
    for p in find_primes(spec, count):
        residues = quadratic_residues(p).residue_set()
        f_image = modular_image(form, residues)
        if 0 in f_image.classes:
            raise RuntimeError(f"0 in f(R_{p}) despite jacobi({-u * v}, {p}) = -1")
        if not qr_sum_diff_full(p):
            raise RuntimeError(f"sums/differences of squares do not cover Z/{p}Z")
        solutions.append(LocalSolution(residues=residues, f_card=len(f_image), g_card=p))
    return solutions


def choose_power_exponent(u: int, v: int) -> tuple[int, int]:
    """Smallest odd prime q with a = -u^(q-1)*v not a perfect integer q-th power.

    Returns (q, a).  Some q below 100 always works for u >= 2: the prime
    exponents of u cannot all be divisible by every candidate q.
    """
    q = 3
    while q < 100:
        if is_prime(q):
            a = -(u ** (q - 1)) * v
            if not is_perfect_kth_power(a, q):
                return q, a
        q += 2
    raise RuntimeError(f"no usable exponent below 100 for (u, v) = ({u}, {v})")


def kth_power_local_solutions(
    u: int,
    v: int,
    count: int,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
) -> list[LocalSolution]:
    """Local solutions from k-th power subgroups, for f = ux+vy vs s or d.

    Picks the smallest odd prime q with a = -u^(q-1)*v not an integer
    q-th power, then primes p = 1 (mod q), p > q^4, p not dividing uv,
    with a not a q-th power residue; the subgroup H of q-th powers then
    has f(H) equal to exactly the nonzero classes while s and d cover
    everything.  Full enumeration verifies each solution while the
    subgroup order is small; beyond that the proven coverage bound plus
    the zero-exclusion test stand in.
    """
    form = LinearForm((u, v))
    if not form.is_normalized or u <= abs(v):
        raise ValueError(f"normalized form with u > |v| >= 1 required, got ({u}, {v})")
    q, a = choose_power_exponent(u, v)

    spec = PrimeSearchSpec(
        residue_conditions=((1, q),),
        lower_bound=q**4,
        extra_predicate=lambda p: u % p != 0
        and v % p != 0
        and not is_qth_power_residue(a, q, p),
        predicate_name=f"{a} is not a {q}-th power mod p",
        search_limit=search_limit,
    )
    solutions = []
    for p in find_primes(spec, count):
        subgroup = power_subgroup(p, q)
        if subgroup.order <= FULL_ENUMERATION_ORDER_CAP:
            f_report = coverage(form, subgroup)
            if f_report.zero_covered or not f_report.covered_nonzero:
                raise RuntimeError(f"k-th power local solution at p={p} failed verification")
            s_report = coverage(SUM, subgroup)
            d_report = coverage(DIFFERENCE, subgroup)
            if not (s_report.covered_nonzero and s_report.zero_covered):
                raise RuntimeError(f"sums over the subgroup mod {p} do not cover Z/{p}Z")
            if not (d_report.covered_nonzero and d_report.zero_covered):
                raise RuntimeError(f"differences over the subgroup mod {p} do not cover Z/{p}Z")
        else:
            # order > cap: p > q^4 guarantees nonzero coverage; 0 stays
            # excluded because a is not a q-th power residue, and -1 is a
            # q-th power (q odd) so sums still reach 0.
            if p - 1 not in subgroup.classes:
                raise RuntimeError(f"-1 is not a {q}-th power mod {p} although {q} is odd")
        solutions.append(
            LocalSolution(residues=subgroup.residue_set(), f_card=p - 1, g_card=p)
        )
    return solutions
