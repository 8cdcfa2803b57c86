"""Residue-ring images and local-to-global set construction.

A local solution is a set of congruence classes R mod m whose image
under f misses classes that g still covers.  Local solutions at pairwise
coprime moduli combine multiplicatively through the Chinese remainder
theorem; picking one integer representative per combined class
("rectification") turns them into a finite integer set A whose image
cardinalities are sandwiched by the modular ones:

    |f(R)| <= |f(A)| <= 2*h_f*|f(R)|    (h_f = sum of |coefficients|)

so a running product of local ratios below 1/(2*h_f) certifies
|f(A)| < |g(A)| without materializing anything.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import _bits
from .intsets import FiniteIntSet, LinearForm, image_cardinality

DEFAULT_ELEMENT_CAP = 10_000_000
DEFAULT_MODULUS_CAP = 10_000_000

DEFAULT_SEARCH_BUDGET = 10_000


@dataclass(frozen=True)
class ResidueSet:
    """A nonempty subset of Z/mZ, stored as sorted classes in [0, m-1]."""

    modulus: int
    classes: tuple[int, ...]

    def __init__(self, modulus: int, classes: Iterable[int]) -> None:
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        reduced = sorted({int(c) % modulus for c in classes})
        if not reduced:
            raise ValueError("a residue set needs at least one class")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "classes", tuple(reduced))

    @classmethod
    def full_ring(cls, modulus: int) -> "ResidueSet":
        return cls(modulus, range(modulus))

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.classes)

    def is_full(self) -> bool:
        return len(self.classes) == self.modulus

    def to_text(self) -> str:
        """The "m: c1,c2,..." line form."""
        return f"{self.modulus}: " + ",".join(str(c) for c in self.classes)

    @classmethod
    def from_text(cls, line: str) -> "ResidueSet":
        head, _, tail = line.partition(":")
        if not tail:
            raise ValueError(f"expected 'm: c1,c2,...', got {line!r}")
        return cls(int(head.strip()), [int(tok) for tok in tail.split(",") if tok.strip()])

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "classes": list(self.classes)}

    @classmethod
    def from_dict(cls, data: dict) -> "ResidueSet":
        return cls(int(data["modulus"]), data["classes"])


def modular_image(form: LinearForm, residues: ResidueSet) -> ResidueSet:
    """The image {sum ui*ri mod m : ri in R} as a residue set mod m."""
    m = residues.modulus
    full = (1 << m) - 1
    acc = None
    for coeff in form.coefficients:
        term = sorted({coeff * r % m for r in residues.classes})
        if acc is None:
            acc = _bits.mask_of(term, 0)
            continue
        shifted = 0
        for t in term:
            shifted |= acc << t
        acc = (shifted & full) | (shifted >> m)
    assert acc is not None
    return ResidueSet(m, _bits.decode(acc, 0))


def crt_product(residue_sets: Sequence[ResidueSet]) -> ResidueSet:
    """Combine residue sets at pairwise coprime moduli into one mod the product.

    The result has exactly prod |R_i| classes, and |f(result)| equals
    prod |f(R_i)| for every linear form f.
    """
    if not residue_sets:
        raise ValueError("crt_product needs at least one residue set")
    combined = residue_sets[0]
    for nxt in residue_sets[1:]:
        m1, m2 = combined.modulus, nxt.modulus
        if math.gcd(m1, m2) != 1:
            raise ValueError(f"moduli {m1} and {m2} are not coprime")
        m = m1 * m2
        inv = pow(m1, -1, m2)
        classes = []
        for a in combined.classes:
            for b in nxt.classes:
                t = (b - a) * inv % m2
                classes.append((a + m1 * t) % m)
        combined = ResidueSet(m, classes)
    expected = 1
    for r in residue_sets:
        expected *= len(r)
    if len(combined) != expected:
        raise RuntimeError("CRT class count mismatch; moduli were not coprime?")
    return combined


def rectify(residues: ResidueSet, window_start: int = 0) -> FiniteIntSet:
    """One integer representative per class, from [window_start, window_start + m - 1].

    window_start=0 picks the least nonnegative representatives.  The
    image cardinalities of the result are sandwiched between |f(R)| and
    2*h_f*|f(R)| for every linear form f.
    """
    m = residues.modulus
    return FiniteIntSet(window_start + (c - window_start) % m for c in residues.classes)


@dataclass(frozen=True)
class LocalSolution:
    """A residue set with the image cardinalities of the two forms attached."""

    residues: ResidueSet
    f_card: int
    g_card: int

    def __post_init__(self) -> None:
        m = self.residues.modulus
        for name, card in (("f_card", self.f_card), ("g_card", self.g_card)):
            if not 1 <= card <= m:
                raise ValueError(f"{name}={card} outside [1, {m}]")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.f_card, self.g_card)

    def to_dict(self) -> dict:
        return {
            "modulus": self.residues.modulus,
            "classes": list(self.residues.classes),
            "f_card": self.f_card,
            "g_card": self.g_card,
        }


def local_solution(form_f: LinearForm, form_g: LinearForm, residues: ResidueSet) -> LocalSolution:
    """Compute both image cardinalities of a residue set."""
    return LocalSolution(
        residues=residues,
        f_card=len(modular_image(form_f, residues)),
        g_card=len(modular_image(form_g, residues)),
    )


def load_locals(text: str) -> list[ResidueSet]:
    """Parse a JSON array of {"modulus": m, "classes": [...]} objects."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("locals file must contain a JSON array")
    return [ResidueSet.from_dict(entry) for entry in data]


@dataclass(frozen=True)
class ConstructionReport:
    """Outcome of combining local solutions against a pair of forms.

    ``mode`` is "threshold" when the exact-rational ratio product fell
    below 1/(2*h_f) (certifying |f(A)| < |g(A)| even without
    materializing A), "direct" when A was materialized and the
    cardinalities compared outright, and "shortfall" when neither route
    established the inequality.
    """

    form_f: LinearForm
    form_g: LinearForm
    locals_used: tuple[LocalSolution, ...]
    combined_modulus: int
    window_start: int
    set_size: int
    ratio_product: Fraction
    threshold: Fraction
    threshold_met: bool
    f_card_upper: int
    g_card_lower: int
    success: bool
    mode: str
    detail: str = ""
    elements: FiniteIntSet | None = None
    f_card: int | None = None
    g_card: int | None = None

    @property
    def representative_window(self) -> tuple[int, int]:
        return (self.window_start, self.window_start + self.combined_modulus - 1)

    def to_dict(self, inline_elements_limit: int = 100_000) -> dict:
        out = {
            "form_f": list(self.form_f.coefficients),
            "form_g": list(self.form_g.coefficients),
            "locals": [loc.to_dict() for loc in self.locals_used],
            "combined_modulus": self.combined_modulus,
            "window": list(self.representative_window),
            "set_size": self.set_size,
            "ratio_product": [self.ratio_product.numerator, self.ratio_product.denominator],
            "threshold": [self.threshold.numerator, self.threshold.denominator],
            "threshold_met": self.threshold_met,
            "f_card_upper": self.f_card_upper,
            "g_card_lower": self.g_card_lower,
            "f_card": self.f_card,
            "g_card": self.g_card,
            "success": self.success,
            "mode": self.mode,
            "detail": self.detail,
        }
        if self.elements is None:
            out["set"] = None
        elif len(self.elements) <= inline_elements_limit:
            out["set"] = list(self.elements.elements)
        else:
            out["set"] = {"inline": False, "size": len(self.elements)}
        return out


def _materialize(form_f: LinearForm, form_g: LinearForm, locs: Sequence[LocalSolution],
                 window_start: int) -> tuple[FiniteIntSet, int, int]:
    combined = crt_product([loc.residues for loc in locs])
    elements = rectify(combined, window_start)
    f_card = image_cardinality(form_f, elements)
    g_card = image_cardinality(form_g, elements)
    f_mod = math.prod(loc.f_card for loc in locs)
    g_mod = math.prod(loc.g_card for loc in locs)
    h = form_f.height
    if not f_mod <= f_card <= 2 * h * f_mod:
        raise RuntimeError(f"rectification sandwich violated for f: {f_mod} <= {f_card} <= {2 * h * f_mod}")
    if g_card < g_mod:
        raise RuntimeError(f"rectification lower bound violated for g: {g_card} < {g_mod}")
    return elements, f_card, g_card


def _fits_caps(locs: Sequence[LocalSolution], element_cap: int, modulus_cap: int) -> bool:
    size = math.prod(len(loc.residues) for loc in locs)
    modulus = math.prod(loc.residues.modulus for loc in locs)
    return size <= element_cap and modulus <= modulus_cap


def build_separating_set(
    form_f: LinearForm,
    form_g: LinearForm,
    locals_stream: Iterable[LocalSolution],
    *,
    window_start: int = 0,
    direct: bool = False,
    element_cap: int = DEFAULT_ELEMENT_CAP,
    modulus_cap: int = DEFAULT_MODULUS_CAP,
) -> ConstructionReport:
    """Consume local solutions until |f(A)| < |g(A)| can be established.

    In the default threshold mode, locals are consumed until the exact
    rational product of f_card/g_card drops below 1/(2*h_f); that
    certifies the inequality, and A is additionally materialized when the
    combined modulus and class count fit the caps.  If the stream runs
    out first, the largest within-caps prefix is materialized and tested
    outright; failing that, the report carries the achieved product.

    With direct=True the threshold is skipped and the full list is
    combined, materialized and tested (the reproduction mode for
    hand-crafted locals).
    """
    h = form_f.height
    threshold = Fraction(1, 2 * h)
    consumed: list[LocalSolution] = []
    product = Fraction(1)
    modulus = 1
    threshold_met = False
    for loc in locals_stream:
        m = loc.residues.modulus
        if math.gcd(modulus, m) != 1:
            raise ValueError(f"modulus {m} is not coprime to the combined modulus {modulus}")
        consumed.append(loc)
        product *= loc.ratio
        modulus *= m
        if not direct and product < threshold:
            threshold_met = True
            break
    if not consumed:
        raise ValueError("no local solutions supplied")

    set_size = math.prod(len(loc.residues) for loc in consumed)
    f_upper = 2 * h * math.prod(loc.f_card for loc in consumed)
    g_lower = math.prod(loc.g_card for loc in consumed)

    def report(*, success: bool, mode: str, detail: str = "", locs: Sequence[LocalSolution] | None = None,
               elements: FiniteIntSet | None = None, f_card: int | None = None,
               g_card: int | None = None) -> ConstructionReport:
        locs = list(consumed if locs is None else locs)
        prod = Fraction(1)
        for loc in locs:
            prod *= loc.ratio
        return ConstructionReport(
            form_f=form_f,
            form_g=form_g,
            locals_used=tuple(locs),
            combined_modulus=math.prod(loc.residues.modulus for loc in locs),
            window_start=window_start,
            set_size=math.prod(len(loc.residues) for loc in locs),
            ratio_product=prod,
            threshold=threshold,
            threshold_met=prod < threshold,
            f_card_upper=2 * h * math.prod(loc.f_card for loc in locs),
            g_card_lower=math.prod(loc.g_card for loc in locs),
            success=success,
            mode=mode,
            detail=detail,
            elements=elements,
            f_card=f_card,
            g_card=g_card,
        )

    if threshold_met:
        if f_upper >= g_lower:
            raise RuntimeError("threshold met but certified bounds do not separate")
        if _fits_caps(consumed, element_cap, modulus_cap):
            elements, f_card, g_card = _materialize(form_f, form_g, consumed, window_start)
            if f_card >= g_card:
                raise RuntimeError(
                    f"threshold certificate contradicted by materialization: {f_card} >= {g_card}"
                )
            return report(success=True, mode="threshold",
                          detail="ratio product below 1/(2*h_f); set materialized",
                          elements=elements, f_card=f_card, g_card=g_card)
        return report(success=True, mode="threshold",
                      detail="ratio product below 1/(2*h_f); set described by (moduli, window), "
                             "beyond the materialization caps")

    if direct:
        if not _fits_caps(consumed, element_cap, modulus_cap):
            return report(success=False, mode="shortfall",
                          detail=f"direct mode but size {set_size} / modulus {modulus} "
                                 f"exceed caps {element_cap} / {modulus_cap}")
        elements, f_card, g_card = _materialize(form_f, form_g, consumed, window_start)
        ok = f_card < g_card
        return report(success=ok, mode="direct" if ok else "shortfall",
                      detail="materialized comparison",
                      elements=elements, f_card=f_card, g_card=g_card)

    # Threshold mode, stream exhausted: try the largest materializable prefix.
    prefix: list[LocalSolution] = []
    for loc in consumed:
        if not _fits_caps(prefix + [loc], element_cap, modulus_cap):
            break
        prefix.append(loc)
    if prefix:
        elements, f_card, g_card = _materialize(form_f, form_g, prefix, window_start)
        if f_card < g_card:
            return report(success=True, mode="direct", locs=prefix,
                          detail=f"stream exhausted at ratio product {product} >= {threshold}; "
                                 f"direct comparison on the first {len(prefix)} locals succeeded",
                          elements=elements, f_card=f_card, g_card=g_card)
        direct_note = (f"; direct comparison on the first {len(prefix)} locals gave "
                       f"|f(A)|={f_card} >= |g(A)|={g_card}")
    else:
        direct_note = "; no prefix fits the materialization caps"
    return report(success=False, mode="shortfall",
                  detail=f"stream exhausted: ratio product {product} never fell below "
                         f"threshold {threshold}{direct_note}")


def local_ratio_search(
    form_f: LinearForm,
    form_g: LinearForm,
    modulus: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> LocalSolution:
    """Heuristic search for R mod m minimizing |f(R)|/|g(R)| with g(R) full.

    Greedy seeding (randomized feasible shrink from the full ring)
    followed by hill-climbing add/remove/swap moves, restarted while the
    move budget lasts.  Deterministic for a fixed seed.  May return the
    full ring (ratio 1) when nothing better is found.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    full = ResidueSet.full_ring(modulus)
    if not modular_image(form_g, full).is_full():
        raise ValueError("infeasible: g does not cover the full ring even on all of Z/mZ")

    rng = random.Random(seed)
    m = modulus

    def feasible(classes: frozenset[int]) -> bool:
        return modular_image(form_g, ResidueSet(m, classes)).is_full()

    def f_count(classes: frozenset[int]) -> int:
        return len(modular_image(form_f, ResidueSet(m, classes)))

    best_classes = frozenset(range(m))
    best_count = f_count(best_classes)
    moves = 0

    def consider(classes: frozenset[int], count: int) -> None:
        nonlocal best_classes, best_count
        key_new = (count, tuple(sorted(classes)))
        key_old = (best_count, tuple(sorted(best_classes)))
        if key_new < key_old:
            best_classes, best_count = classes, count

    while moves < budget:
        # Greedy seed: randomized shrink from the full ring, keeping g full.
        current = set(range(m))
        order = list(range(m))
        rng.shuffle(order)
        for r in order:
            if len(current) <= 1:
                break
            current.discard(r)
            if not feasible(frozenset(current)):
                current.add(r)
        current_f = f_count(frozenset(current))
        consider(frozenset(current), current_f)

        stale = 0
        while moves < budget and stale < 3 * m:
            moves += 1
            kind = rng.randrange(3)
            trial = set(current)
            if kind == 0 and len(trial) > 1:
                trial.discard(rng.choice(sorted(trial)))
            elif kind == 1 and len(trial) < m:
                missing = [c for c in range(m) if c not in trial]
                trial.add(rng.choice(missing))
            elif kind == 2 and 0 < len(trial) < m:
                missing = [c for c in range(m) if c not in trial]
                trial.discard(rng.choice(sorted(trial)))
                trial.add(rng.choice(missing))
            else:
                continue
            frozen = frozenset(trial)
            if not feasible(frozen):
                stale += 1
                continue
            count = f_count(frozen)
            # Accept non-worsening moves so plateaus can be crossed.
            if count <= current_f:
                if count < current_f:
                    stale = 0
                current, current_f = trial, count
                consider(frozen, count)
            else:
                stale += 1

    residues = ResidueSet(m, best_classes)
    return LocalSolution(residues=residues, f_card=best_count, g_card=m)
