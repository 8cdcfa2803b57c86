"""Explicit small witness sets for pairs of binary linear forms.

Exhaustive classification of 3-element sets with a deficient image,
3- and 4-element sets separating two forms in both directions, the
5-element set separating ux+vy from x-y, and arithmetic progressions on
which conjugate forms agree.  Every construction re-verifies its claimed
cardinalities by direct computation before returning.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .intsets import (
    DIFFERENCE,
    FiniteIntSet,
    LinearForm,
    canonical_pair,
    image_cardinality,
)


@dataclass(frozen=True)
class TripleClassification:
    """All 3-element sets (up to affine equivalence) where |f(A)| < 9.

    ``exceptional_canonicals[i]`` is the canonical representative of the
    i-th exceptional class and ``cardinalities[i]`` its image size.
    """

    form: LinearForm
    bound: int
    exceptional_canonicals: tuple[FiniteIntSet, ...]
    cardinalities: tuple[int, ...]

    def as_pairs(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return tuple(
            (s.elements, c) for s, c in zip(self.exceptional_canonicals, self.cardinalities)
        )


@dataclass(frozen=True)
class WitnessPair:
    """Two sets on which |f| and |g| strictly separate in opposite directions."""

    form_f: LinearForm
    form_g: LinearForm
    set_a: FiniteIntSet
    set_b: FiniteIntSet
    f_of_a: int
    g_of_a: int
    f_of_b: int
    g_of_b: int

    def __post_init__(self) -> None:
        a_sign = self.f_of_a - self.g_of_a
        b_sign = self.f_of_b - self.g_of_b
        if a_sign == 0 or b_sign == 0 or (a_sign > 0) == (b_sign > 0):
            raise RuntimeError(
                "witness pair does not separate strictly in opposite directions: "
                f"|f(A)|={self.f_of_a}, |g(A)|={self.g_of_a}, "
                f"|f(B)|={self.f_of_b}, |g(B)|={self.g_of_b}"
            )


def _require_normalized(form: LinearForm) -> tuple[int, int]:
    if not form.is_normalized:
        raise ValueError(f"normalized binary form required, got {form.coefficients}")
    return form.coefficients


def classify_triples(form: LinearForm, bound: int | None = None, threads: int = 1) -> TripleClassification:
    """Enumerate canonical triples {0,a,b} with a < b <= bound and |f| < 9.

    Candidates with gcd(a, b) = 1 are deduplicated up to full affine
    equivalence; any exceptional triple has a representative with
    b <= u + |v|, so that is the default bound.
    """
    u, v = _require_normalized(form)
    min_bound = u + abs(v)
    if bound is None:
        bound = min_bound
    if bound < min_bound:
        raise ValueError(f"bound {bound} is below the exhaustive minimum {min_bound}")

    candidates = [(a, b) for b in range(2, bound + 1) for a in range(1, b) if math.gcd(a, b) == 1]

    def scan(chunk: list[tuple[int, int]]) -> dict[tuple[int, ...], int]:
        found: dict[tuple[int, ...], int] = {}
        for a, b in chunk:
            card = image_cardinality(form, FiniteIntSet((0, a, b)), strategy="pairs")
            if card < 9:
                key = canonical_pair(FiniteIntSet((0, a, b))).elements
                prev = found.setdefault(key, card)
                if prev != card:
                    raise RuntimeError(f"cardinality disagrees within equivalence class {key}")
        return found

    if threads > 1 and len(candidates) > 1:
        step = (len(candidates) + threads - 1) // threads
        chunks = [candidates[i : i + step] for i in range(0, len(candidates), step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(scan, chunks))
    else:
        partials = [scan(candidates)]

    merged: dict[tuple[int, ...], int] = {}
    for part in partials:
        for key, card in part.items():
            prev = merged.setdefault(key, card)
            if prev != card:
                raise RuntimeError(f"cardinality disagrees within equivalence class {key}")

    keys = sorted(merged)
    return TripleClassification(
        form=form,
        bound=bound,
        exceptional_canonicals=tuple(FiniteIntSet(k) for k in keys),
        cardinalities=tuple(merged[k] for k in keys),
    )


def three_set_witness(form_f: LinearForm, form_g: LinearForm) -> WitnessPair:
    """3-element sets A, B with |f(A)| < |g(A)| and |f(B)| > |g(B)|.

    Requires both forms normalized with leading coefficient >= 2 and
    (u1, |v1|) != (u2, |v2|); conjugate pairs (u, v) vs (u, -v) have no
    3-element witness and are rejected.
    """
    u1, v1 = _require_normalized(form_f)
    u2, v2 = _require_normalized(form_g)
    if u1 < 2 or u2 < 2:
        raise ValueError("both forms need leading coefficient >= 2")
    if (u1, abs(v1)) == (u2, abs(v2)):
        raise ValueError("forms with equal (u, |v|) admit no 3-element witness")
    if (u1, abs(v1)) > (u2, abs(v2)):
        flipped = three_set_witness(form_g, form_f)
        return WitnessPair(
            form_f=form_f,
            form_g=form_g,
            set_a=flipped.set_b,
            set_b=flipped.set_a,
            f_of_a=flipped.g_of_b,
            g_of_a=flipped.f_of_b,
            f_of_b=flipped.g_of_a,
            g_of_b=flipped.f_of_a,
        )

    if u1 < u2 and u2 != u1 + abs(v1):
        set_a = FiniteIntSet((0, abs(v1), u1))
        set_b = FiniteIntSet((0, abs(v2), u2))
    elif u1 < u2:
        set_a = FiniteIntSet((0, abs(v1), u1))
        set_b = FiniteIntSet((0, abs(v2), u2 + abs(v2)))
    else:
        set_a = FiniteIntSet((0, abs(v1), u1 + abs(v1)))
        set_b = FiniteIntSet((0, abs(v2), u2 + abs(v2)))

    f_of_a = image_cardinality(form_f, set_a)
    g_of_a = image_cardinality(form_g, set_a)
    f_of_b = image_cardinality(form_f, set_b)
    g_of_b = image_cardinality(form_g, set_b)
    if not (f_of_a <= 8 and g_of_a == 9 and f_of_b == 9 and g_of_b <= 8):
        raise RuntimeError(
            f"3-set witness verification failed for {form_f.coefficients} vs "
            f"{form_g.coefficients}: got {f_of_a}, {g_of_a}, {f_of_b}, {g_of_b}"
        )
    return WitnessPair(form_f, form_g, set_a, set_b, f_of_a, g_of_a, f_of_b, g_of_b)


def conjugate_four_set_witness(u: int, v: int) -> WitnessPair:
    """4-element sets separating ux+vy from its conjugate ux-vy both ways.

    For u = 2 the pair is {0,3,4,6} / {0,4,6,7} with cardinalities
    13 > 12 and 13 < 14; for u >= 3 the sets are built from u and v and
    give 14 > 13 and 13 < 14.  All four cardinalities are recomputed and
    checked against these patterns.
    """
    if v < 1 or u <= v:
        raise ValueError(f"need u > v >= 1, got u={u}, v={v}")
    if math.gcd(u, v) != 1:
        raise ValueError(f"u and v must be coprime, got gcd={math.gcd(u, v)}")
    form_f = LinearForm((u, v))
    form_g = LinearForm((u, -v))
    if u == 2:
        set_a = FiniteIntSet((0, 3, 4, 6))
        set_b = FiniteIntSet((0, 4, 6, 7))
        expected = (13, 12, 13, 14)
    else:
        set_a = FiniteIntSet((0, u * u - v * v, u * u, u * u + u * v))
        set_b = FiniteIntSet((0, u * u - u * v, u * u - v * v, u * u))
        expected = (14, 13, 13, 14)

    cards = (
        image_cardinality(form_f, set_a),
        image_cardinality(form_g, set_a),
        image_cardinality(form_f, set_b),
        image_cardinality(form_g, set_b),
    )
    if cards != expected:
        raise RuntimeError(
            f"4-set witness verification failed for (u,v)=({u},{v}): "
            f"expected {expected}, computed {cards}"
        )
    return WitnessPair(form_f, form_g, set_a, set_b, *cards)


def five_set_witness(u: int, v: int) -> tuple[FiniteIntSet, int, int]:
    """A 5-element set with |f(A)| <= 19 but |A - A| = 21, for f = ux+vy.

    A is the geometric-mix set {0, v^3, v^3+v^2*u, v^3+v^2*u+v*u^2,
    v^3+v^2*u+v*u^2+u^3}.  Returns (A, |f(A)|, |d(A)|) after verifying
    both counts.
    """
    if v < 1 or u <= v:
        raise ValueError(f"need u > v >= 1, got u={u}, v={v}")
    if math.gcd(u, v) != 1:
        raise ValueError(f"u and v must be coprime, got gcd={math.gcd(u, v)}")
    a1 = v**3
    a2 = a1 + v * v * u
    a3 = a2 + v * u * u
    a4 = a3 + u**3
    witness = FiniteIntSet((0, a1, a2, a3, a4))
    card_f = image_cardinality(LinearForm((u, v)), witness)
    card_d = image_cardinality(DIFFERENCE, witness)
    if card_d != 21 or card_f > 19:
        raise RuntimeError(
            f"5-set witness verification failed for (u,v)=({u},{v}): "
            f"|f(A)|={card_f}, |d(A)|={card_d}"
        )
    return witness, card_f, card_d


def ap_equality_set(u: int, v: int, t: int) -> FiniteIntSet:
    """The progression [0, t-1], on which ux+vy and ux-vy agree with t^2 values.

    Valid for 1 <= t <= u; beyond u the equality guarantee fails, so
    larger t is rejected.
    """
    if v < 1 or u <= v:
        raise ValueError(f"need u > v >= 1, got u={u}, v={v}")
    if math.gcd(u, v) != 1:
        raise ValueError(f"u and v must be coprime, got gcd={math.gcd(u, v)}")
    if not 1 <= t <= u:
        raise ValueError(f"progression length must satisfy 1 <= t <= u={u}, got {t}")
    return FiniteIntSet(range(t))
