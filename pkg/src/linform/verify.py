"""Built-in verification suite: every headline cardinality claim, re-checked.

Each check recomputes one family of values or inequalities from scratch
and enforces its runtime budget.  The CLI ``verify`` subcommand renders
the results as a pass/fail table; the same checks back the test suite.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Sequence

from .intsets import (
    DIFFERENCE,
    SUM,
    FiniteIntSet,
    LinearForm,
    canonical_pair,
    image_cardinality,
)
from .modular import (
    LocalSolution,
    ResidueSet,
    build_separating_set,
    crt_product,
    load_locals,
    local_solution,
    modular_image,
    rectify,
)
from .numtheory import jacobi, primes_between
from .residues import coverage, kth_power_local_solutions, power_subgroup, qr_local_solutions, qr_sum_diff_full, zero_in_f_of_qr
from .smallsets import ap_equality_set, classify_triples, conjugate_four_set_witness, five_set_witness

MSTD_SET = FiniteIntSet((0, 2, 3, 4, 7, 11, 12, 14))


class CheckFailure(AssertionError):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail, "seconds": self.seconds}


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


def packaged_locals() -> list[ResidueSet]:
    """The hand-picked residue sets for 2x+y vs x+y shipped with the package."""
    text = resources.files("linform").joinpath("data/locals_2x_plus_y.json").read_text()
    return load_locals(text)


def packaged_example_set() -> FiniteIntSet:
    from .intsets import set_from_text

    text = resources.files("linform").joinpath("data/mstd8.txt").read_text()
    return set_from_text(text)


# ---------------------------------------------------------------------------
# the checks


def check_mstd_counterexample() -> str:
    start = time.perf_counter()
    sums = image_cardinality(SUM, MSTD_SET)
    diffs = image_cardinality(DIFFERENCE, MSTD_SET)
    elapsed = time.perf_counter() - start
    _expect(diffs == 25, f"|A-A| = {diffs}, expected 25")
    _expect(sums == 26, f"|A+A| = {sums}, expected 26")
    _expect(elapsed < 0.001, f"took {elapsed * 1000:.3f} ms, budget 1 ms")
    return f"|A-A|=25 < |A+A|=26 in {elapsed * 1e6:.0f} us"


def check_crt_construction(locals_override: Sequence[ResidueSet] | None = None) -> str:
    f = LinearForm((2, 1))
    residue_sets = list(locals_override) if locals_override is not None else packaged_locals()
    locs = [local_solution(f, SUM, r) for r in residue_sets]
    report = build_separating_set(f, SUM, locs, window_start=1, direct=True)
    _expect(report.set_size == 2646, f"|A| = {report.set_size}, expected 2646")
    _expect(report.f_card == 108014, f"|f(A)| = {report.f_card}, expected 108014")
    _expect(report.g_card == 114575, f"|s(A)| = {report.g_card}, expected 114575")
    _expect(report.success, "report did not declare success")
    return f"|A|=2646, |f(A)|=108014 < |s(A)|=114575; ratio product {report.ratio_product}"


def _normalized_forms(max_u: int, min_u: int = 2) -> list[LinearForm]:
    forms = []
    for u in range(min_u, max_u + 1):
        for av in range(1, u):
            if math.gcd(u, av) == 1:
                forms.append(LinearForm((u, av)))
                forms.append(LinearForm((u, -av)))
    return forms


def check_triple_classification(threads: int = 1) -> str:
    scanned = 0
    for form in _normalized_forms(10):
        u, v = form.coefficients
        result = classify_triples(form, threads=threads)
        got = {s.elements: c for s, c in zip(result.exceptional_canonicals, result.cardinalities)}
        if u == 2:
            expected = {(0, 1, 2): 7, (0, 1, 3): 8}
        else:
            expected = {
                canonical_pair(FiniteIntSet((0, abs(v), u))).elements: 8,
                canonical_pair(FiniteIntSet((0, abs(v), u + abs(v)))).elements: 8,
            }
        _expect(got == expected, f"form {form.coefficients}: exceptional triples {got} != {expected}")
        scanned += 1
    return f"{scanned} normalized forms with u <= 10 match the two-family classification"


def check_four_set_witnesses() -> str:
    pairs = 0
    for u in range(2, 21):
        for v in range(1, u):
            if math.gcd(u, v) != 1:
                continue
            w = conjugate_four_set_witness(u, v)
            expected = (13, 12, 13, 14) if u == 2 else (14, 13, 13, 14)
            got = (w.f_of_a, w.g_of_a, w.f_of_b, w.g_of_b)
            _expect(got == expected, f"(u,v)=({u},{v}): counts {got} != {expected}")
            pairs += 1
    return f"{pairs} coprime pairs with u <= 20 show the 4-element pattern"


def check_five_set_witnesses() -> str:
    pairs = 0
    for u in range(2, 51):
        for v in range(1, u):
            if math.gcd(u, v) != 1:
                continue
            _, card_f, card_d = five_set_witness(u, v)
            _expect(card_d == 21, f"(u,v)=({u},{v}): |d(A)| = {card_d} != 21")
            _expect(card_f <= 19, f"(u,v)=({u},{v}): |f(A)| = {card_f} > 19")
            _expect(card_f < card_d, f"(u,v)=({u},{v}): |f(A)| not below |d(A)|")
            pairs += 1
    return f"{pairs} coprime pairs with u <= 50 give |f(A)| <= 19 < 21 = |d(A)|"


def check_ap_equality() -> str:
    cases = 0
    for u in range(2, 13):
        for v in range(1, u):
            if math.gcd(u, v) != 1:
                continue
            for t in range(1, u + 1):
                a = ap_equality_set(u, v, t)
                cf = image_cardinality(LinearForm((u, v)), a)
                cg = image_cardinality(LinearForm((u, -v)), a)
                _expect(cf == cg == t * t, f"(u,v,t)=({u},{v},{t}): got {cf}, {cg}, expected {t * t}")
                cases += 1
    return f"{cases} progressions with u <= 12 give |f| = |g| = t^2"


def check_amplification() -> str:
    from .intsets import amplify

    rng = random.Random(2024)
    for trial in range(20):
        elems = rng.sample(range(-40, 40), rng.randint(2, 12))
        a = FiniteIntSet(elems)
        coeffs = lambda: rng.choice([c for c in range(-5, 6) if c != 0])
        f = LinearForm((coeffs(), coeffs()))
        g = LinearForm((coeffs(), coeffs()))
        fa, ga = image_cardinality(f, a), image_cardinality(g, a)
        _, amplified = amplify(f, g, a)
        _expect(len(amplified) == len(a) ** 2, f"trial {trial}: |A_M| != |A|^2")
        _expect(image_cardinality(f, amplified) == fa * fa, f"trial {trial}: |f(A_M)| != |f(A)|^2")
        _expect(image_cardinality(g, amplified) == ga * ga, f"trial {trial}: |g(A_M)| != |g(A)|^2")
    return "20 random instances square |A|, |f(A)| and |g(A)| exactly"


def check_crt_and_rectification() -> str:
    rng = random.Random(99)
    moduli = [m for m in range(2, 51)]
    for trial in range(100):
        while True:
            m1, m2 = rng.choice(moduli), rng.choice(moduli)
            if math.gcd(m1, m2) == 1:
                break
        r1 = ResidueSet(m1, rng.sample(range(m1), rng.randint(1, m1)))
        r2 = ResidueSet(m2, rng.sample(range(m2), rng.randint(1, m2)))
        u = rng.choice([c for c in range(-10, 11) if c])
        v = rng.choice([c for c in range(-10, 11) if c])
        f = LinearForm((u, v))
        combined = crt_product([r1, r2])
        _expect(len(combined) == len(r1) * len(r2), f"trial {trial}: |R| not multiplicative")
        lhs = len(modular_image(f, combined))
        rhs = len(modular_image(f, r1)) * len(modular_image(f, r2))
        _expect(lhs == rhs, f"trial {trial}: |f(R)| = {lhs} != {rhs}")
        for window in (0, 1):
            a = rectify(combined, window)
            fa = image_cardinality(f, a)
            fr = lhs
            _expect(fr <= fa <= 2 * f.height * fr,
                    f"trial {trial}: sandwich violated: {fr} <= {fa} <= {2 * f.height * fr}")
    return "100 random instances: exact multiplicativity and rectification sandwich"


def check_quadratic_residue_coverage() -> str:
    count = 0
    for p in primes_between(13, 997):
        if p % 4 == 1:
            _expect(qr_sum_diff_full(p), f"sums/differences of squares miss a class mod {p}")
            count += 1
    zero_cases = 0
    for p in primes_between(3, 200):
        for form in _normalized_forms(10, min_u=1):
            u, v = form.coefficients
            if u % p == 0 or v % p == 0:
                continue
            enumerated = zero_in_f_of_qr(u, v, p)
            _expect(enumerated == (jacobi(-u * v, p) == 1),
                    f"zero membership mismatch for ({u},{v}) mod {p}")
            zero_cases += 1
    return f"{count} primes cover Z/pZ; zero membership matches the symbol in {zero_cases} cases"


def check_subgroup_coverage() -> str:
    forms = [SUM, DIFFERENCE, LinearForm((2, 1)), LinearForm((3, 2))]
    reports = 0
    for k in (2, 3):
        for p in primes_between(k**4 + 1, 2000):
            if (p - 1) % k != 0:
                continue
            subgroup = power_subgroup(p, k)
            for form in forms:
                u, v = form.coefficients
                if u % p == 0 or v % p == 0:
                    continue
                report = coverage(form, subgroup)
                _expect(report.covered_nonzero, f"nonzero class missed: p={p}, k={k}, f={form.coefficients}")
                reports += 1
    return f"{reports} coverage reports: all nonzero classes hit, counts consistent"


def check_pipeline_qr() -> str:
    f = LinearForm((2, 1))
    locs = qr_local_solutions(2, 1, count=5)
    _expect(len(locs) == 5, "prime search shortfall while collecting local solutions")
    report = build_separating_set(f, SUM, locs)
    _expect(report.threshold == Fraction(1, 6), f"threshold {report.threshold} != 1/6")
    _expect(report.success and report.f_card is not None and report.f_card < report.g_card,
            f"no separating set established: mode={report.mode}, "
            f"ratio product={report.ratio_product}, detail: {report.detail}")
    return f"|f(A)|={report.f_card} < |g(A)|={report.g_card} via {report.mode}"


def check_pipeline_kpower() -> str:
    f = LinearForm((2, 1))
    locs = kth_power_local_solutions(2, 1, count=2)
    _expect(len(locs) == 2, "prime search shortfall while collecting local solutions")
    report = build_separating_set(f, DIFFERENCE, locs)
    _expect(report.success and report.f_card is not None and report.f_card < report.g_card,
            f"no separating set established: mode={report.mode}, "
            f"ratio product={report.ratio_product}, detail: {report.detail}")
    return f"|f(A)|={report.f_card} < |g(A)|={report.g_card} via {report.mode}"


CHECKS: tuple[tuple[str, Callable[[], str], float], ...] = (
    ("mstd-counterexample", check_mstd_counterexample, 1.0),
    ("crt-construction-2x+y", check_crt_construction, 5.0),
    ("triple-classification", check_triple_classification, 10.0),
    ("four-set-witnesses", check_four_set_witnesses, 1.0),
    ("five-set-witness", check_five_set_witnesses, 5.0),
    ("ap-equality", check_ap_equality, 1.0),
    ("amplification", check_amplification, 5.0),
    ("crt-and-rectification", check_crt_and_rectification, 5.0),
    ("quadratic-residue-coverage", check_quadratic_residue_coverage, 30.0),
    ("subgroup-coverage", check_subgroup_coverage, 60.0),
    ("pipeline-qr", check_pipeline_qr, 300.0),
    ("pipeline-kpower", check_pipeline_kpower, 300.0),
)


def run_checks(only: str | None = None, threads: int = 1) -> list[CheckResult]:
    """Run the verification checks, optionally filtered by name prefix."""
    results = []
    for name, fn, budget in CHECKS:
        if only and not name.startswith(only):
            continue
        start = time.perf_counter()
        try:
            if fn is check_triple_classification:
                detail = fn(threads=threads)  # type: ignore[call-arg]
            else:
                detail = fn()
            elapsed = time.perf_counter() - start
            if elapsed > budget:
                results.append(CheckResult(name, False, f"exceeded {budget:.0f} s budget: {elapsed:.1f} s", elapsed))
            else:
                results.append(CheckResult(name, True, detail, elapsed))
        except CheckFailure as exc:
            results.append(CheckResult(name, False, str(exc), time.perf_counter() - start))
    return results


def render_table(results: Sequence[CheckResult]) -> str:
    lines = []
    for r in results:
        tag = "PASS" if r.ok else "FAIL"
        lines.append(f"{tag}  {r.name:<28} {r.seconds:7.2f}s  {r.detail}")
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
