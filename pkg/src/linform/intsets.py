"""Finite integer sets, linear forms, images, and affine canonical forms.

The image of a linear form f(x1,...,xn) = u1*x1 + ... + un*xn on a set A
is {f(a1,...,an) : ai in A}, computed here by folding sumsets of the
dilations ui*A.  Three interchangeable sumset kernels are provided
(hash enumeration, sorted k-way merge, bitmask) and selected
automatically by input size unless overridden.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import _bits

STRATEGIES = ("auto", "pairs", "merge", "bitset")

# Widest window (in bits) the auto-selected bitmask kernel will allocate;
# 1 << 27 bits is 16 MiB.  An explicit strategy="bitset" ignores the cap.
BITSET_WIDTH_CAP = 1 << 27

_PAIRS_TUPLE_CAP = 4_000_000


@dataclass(frozen=True)
class FiniteIntSet:
    """A sorted, duplicate-free finite set of arbitrary-precision integers."""

    elements: tuple[int, ...]

    def __init__(self, elements: Iterable[int] = ()) -> None:
        seen = set()
        for a in elements:
            if not isinstance(a, int) or isinstance(a, bool):
                raise ValueError(f"set elements must be integers, got {a!r}")
            seen.add(a)
        object.__setattr__(self, "elements", tuple(sorted(seen)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, value: int) -> bool:
        i = _bisect(self.elements, value)
        return i >= 0

    def __getitem__(self, i: int) -> int:
        return self.elements[i]

    def __bool__(self) -> bool:
        return bool(self.elements)

    def reflect(self) -> "FiniteIntSet":
        """The set {-a : a in A}."""
        return FiniteIntSet(-a for a in self.elements)

    def translate(self, c: int) -> "FiniteIntSet":
        return FiniteIntSet(a + c for a in self.elements)


def _bisect(elems: tuple[int, ...], value: int) -> int:
    lo, hi = 0, len(elems)
    while lo < hi:
        mid = (lo + hi) // 2
        if elems[mid] < value:
            lo = mid + 1
        elif elems[mid] > value:
            hi = mid
        else:
            return mid
    return -1


@dataclass(frozen=True)
class LinearForm:
    """An integer linear form given by its nonzero coefficient vector."""

    coefficients: tuple[int, ...]

    def __init__(self, coefficients: Iterable[int]) -> None:
        coeffs = tuple(coefficients)
        if not coeffs:
            raise ValueError("a linear form needs at least one coefficient")
        for c in coeffs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValueError(f"coefficients must be integers, got {c!r}")
            if c == 0:
                raise ValueError("zero coefficients are not allowed")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def binary(cls, u: int, v: int) -> "LinearForm":
        return cls((u, v))

    @property
    def arity(self) -> int:
        return len(self.coefficients)

    @property
    def height(self) -> int:
        """Sum of the absolute values of the coefficients."""
        return sum(abs(c) for c in self.coefficients)

    @property
    def is_binary(self) -> bool:
        return len(self.coefficients) == 2

    @property
    def u(self) -> int:
        self._require_binary()
        return self.coefficients[0]

    @property
    def v(self) -> int:
        self._require_binary()
        return self.coefficients[1]

    def _require_binary(self) -> None:
        if len(self.coefficients) != 2:
            raise ValueError(f"binary form required, this one has arity {self.arity}")

    @property
    def is_normalized(self) -> bool:
        """u >= |v| >= 1, gcd(u, v) = 1, u > 0 (binary forms only)."""
        self._require_binary()
        u, v = self.coefficients
        return u >= abs(v) >= 1 and math.gcd(u, v) == 1


SUM = LinearForm((1, 1))
DIFFERENCE = LinearForm((1, -1))


@dataclass(frozen=True)
class NormalizationTrace:
    """A binary form together with its normalized equivalent and the moves taken.

    Each recorded move (gcd division, coefficient swap, global negation)
    preserves the image cardinality |f(A)| for every finite set A.
    """

    original: LinearForm
    normalized: LinearForm
    steps: tuple[str, ...]


def normalize_form(form: LinearForm) -> NormalizationTrace:
    """Reduce a binary form to u >= |v| >= 1, gcd(u, v) = 1, u > 0."""
    form._require_binary()
    u, v = form.coefficients
    steps: list[str] = []
    d = math.gcd(u, v)
    if d > 1:
        u, v = u // d, v // d
        steps.append(f"divide-gcd:{d}")
    if abs(u) < abs(v):
        u, v = v, u
        steps.append("swap")
    if u < 0:
        u, v = -u, -v
        steps.append("negate")
    normalized = LinearForm((u, v))
    if not normalized.is_normalized:
        raise RuntimeError(f"normalization of {form.coefficients} produced {normalized.coefficients}")
    return NormalizationTrace(original=form, normalized=normalized, steps=tuple(steps))


def dilate(u: int, a: FiniteIntSet | Iterable[int]) -> FiniteIntSet:
    """The dilation u*A = {u*a : a in A}; u must be nonzero."""
    if u == 0:
        raise ValueError("dilation by zero collapses the set")
    a = _as_set(a)
    _require_nonempty(a)
    return FiniteIntSet(u * x for x in a)


def sumset(a: FiniteIntSet | Iterable[int], b: FiniteIntSet | Iterable[int],
           strategy: str = "auto") -> FiniteIntSet:
    """The sumset A + B = {a + b : a in A, b in B}."""
    a, b = _as_set(a), _as_set(b)
    _require_nonempty(a)
    _require_nonempty(b)
    values = _fold_sumsets([list(a.elements), list(b.elements)], strategy)
    return FiniteIntSet(values)


def image(form: LinearForm, a: FiniteIntSet | Iterable[int], strategy: str = "auto") -> FiniteIntSet:
    """The image f(A) = {sum ui*ai : ai in A}, sorted and deduplicated."""
    a = _as_set(a)
    _require_nonempty(a)
    terms = [sorted({c * x for x in a.elements}) for c in form.coefficients]
    return FiniteIntSet(_fold_sumsets(terms, strategy))


def image_cardinality(form: LinearForm, a: FiniteIntSet | Iterable[int],
                      strategy: str = "auto") -> int:
    """|f(A)| without materializing the image when the bitmask kernel applies."""
    a = _as_set(a)
    _require_nonempty(a)
    terms = [sorted({c * x for x in a.elements}) for c in form.coefficients]
    chosen = _choose_strategy(terms, strategy)
    if chosen == "bitset":
        mask, _ = _bitset_fold(terms)
        return mask.bit_count()
    return len(_fold_sumsets(terms, chosen))


def _as_set(a: FiniteIntSet | Iterable[int]) -> FiniteIntSet:
    return a if isinstance(a, FiniteIntSet) else FiniteIntSet(a)


def _require_nonempty(a: FiniteIntSet) -> None:
    if not a.elements:
        raise ValueError("empty sets are rejected; every operation here assumes a nonempty set")


def _width(terms: list[list[int]]) -> int:
    lo = sum(t[0] for t in terms)
    hi = sum(t[-1] for t in terms)
    return hi - lo + 1


def _choose_strategy(terms: list[list[int]], strategy: str) -> str:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    if strategy != "auto":
        return strategy
    width = _width(terms)
    tuples = 1
    for t in terms:
        tuples = min(tuples * len(t), 10 * _PAIRS_TUPLE_CAP)
    # Rough cost model: the bitmask kernel shifts a width-bit accumulator
    # once per element of each later term, at about one machine word per
    # 64 bits; hash enumeration costs a bigger constant per tuple.
    rows = max(sum(len(t) for t in terms[1:]), 1)
    bitset_cost = rows * (width // 64 + 1)
    if width <= BITSET_WIDTH_CAP and bitset_cost <= 120 * tuples:
        return "bitset"
    if tuples <= _PAIRS_TUPLE_CAP:
        return "pairs"
    if width <= BITSET_WIDTH_CAP:
        return "bitset"
    return "merge"


def _fold_sumsets(terms: list[list[int]], strategy: str) -> list[int]:
    chosen = _choose_strategy(terms, strategy)
    if chosen == "bitset":
        mask, base = _bitset_fold(terms)
        return _bits.decode(mask, base)
    kernel = _sumset_pairs if chosen == "pairs" else _sumset_merge
    acc = terms[0]
    for term in terms[1:]:
        acc = kernel(acc, term)
    return acc


def _sumset_pairs(xs: list[int], ys: list[int]) -> list[int]:
    return sorted({x + y for x in xs for y in ys})


def _shifted_stream(x: int, ys: list[int]) -> Iterator[int]:
    return (x + y for y in ys)


def _sumset_merge(xs: list[int], ys: list[int]) -> list[int]:
    # One sorted stream per x, merged lazily; memory stays O(|xs|).
    out: list[int] = []
    last = None
    for v in heapq.merge(*(_shifted_stream(x, ys) for x in xs)):
        if v != last:
            out.append(v)
            last = v
    return out


def _bitset_fold(terms: list[list[int]]) -> tuple[int, int]:
    """Fold the term sumsets as bitmasks; returns (mask, base).

    Each stage shifts the accumulated mask by the offsets of the next
    term's elements, so intermediate images are never decoded.
    """
    base = terms[0][0]
    acc = _bits.mask_of(terms[0], base)
    for term in terms[1:]:
        tbase = term[0]
        shifted = 0
        for t in term:
            shifted |= acc << (t - tbase)
        acc = shifted
        base += tbase
    return acc, base


def affine_canonical(a: FiniteIntSet | Iterable[int]) -> FiniteIntSet:
    """Translate to min 0 and divide by the gcd of the nonzero elements.

    The result is the unique representative of A under translation and
    positive dilation; |A| >= 2 required.
    """
    a = _as_set(a)
    if len(a) < 2:
        raise ValueError("affine canonical form needs at least two elements")
    lo = a.elements[0]
    shifted = [x - lo for x in a.elements]
    g = 0
    for x in shifted:
        g = math.gcd(g, x)
    return FiniteIntSet(x // g for x in shifted)


def canonical_pair(a: FiniteIntSet | Iterable[int]) -> FiniteIntSet:
    """Equivalence key under the full affine group (negative dilations too).

    Lexicographic minimum of the canonical forms of A and of -A; two sets
    are affinely equivalent exactly when their keys are equal.
    """
    a = _as_set(a)
    c1 = affine_canonical(a)
    c2 = affine_canonical(a.reflect())
    return c1 if c1.elements <= c2.elements else c2


def affinely_equivalent(a: FiniteIntSet | Iterable[int], b: FiniteIntSet | Iterable[int]) -> bool:
    return canonical_pair(a) == canonical_pair(b)


def amplify(form_f: LinearForm, form_g: LinearForm,
            a: FiniteIntSet | Iterable[int]) -> tuple[int, FiniteIntSet]:
    """Square both image cardinalities at once: A_M = A + M*A.

    M is the smallest integer exceeding twice the largest absolute value
    in A, f(A) and g(A); this guarantees |A_M| = |A|^2, |f(A_M)| = |f(A)|^2
    and |g(A_M)| = |g(A)|^2.
    """
    if form_f.arity != form_g.arity:
        raise ValueError("both forms must have the same arity")
    a = _as_set(a)
    _require_nonempty(a)
    fa = image(form_f, a)
    ga = image(form_g, a)
    m = max(abs(x) for s in (a, fa, ga) for x in s)
    big_m = 2 * m + 1
    return big_m, sumset(a, dilate(big_m, a))


# ---------------------------------------------------------------------------
# serialization: line-oriented text and JSON, both exact round-trips

def set_to_text(a: FiniteIntSet) -> str:
    """One integer per line."""
    return "\n".join(str(x) for x in a.elements) + "\n"


def set_from_text(text: str) -> FiniteIntSet:
    """Parse one integer per line; '#' starts a comment, blank lines ignored."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            values.append(int(body))
        except ValueError:
            raise ValueError(f"line {lineno}: not an integer: {body!r}") from None
    return FiniteIntSet(values)


def set_to_json(a: FiniteIntSet) -> str:
    return json.dumps(list(a.elements))


def set_from_json(text: str) -> FiniteIntSet:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("JSON set form must be an array of integers")
    return FiniteIntSet(data)
