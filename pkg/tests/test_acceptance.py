"""Acceptance suite: one test per headline criterion, at stated tolerances.

Each test prints a single PASS line on success (run with -s to see them).
The two end-to-end pipeline tests (criterion 11) assert the strict
|f(A)| < |g(A)| success report exactly as stated; see the repository
notes for the blocking analysis of why prime-subgroup local solutions
cannot reach it at desk scale.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from linform.intsets import (
    DIFFERENCE,
    SUM,
    FiniteIntSet,
    LinearForm,
    amplify,
    canonical_pair,
    image_cardinality,
)
from linform.modular import (
    ResidueSet,
    build_separating_set,
    crt_product,
    local_solution,
    modular_image,
    rectify,
)
from linform.numtheory import jacobi, primes_between
from linform.residues import (
    coverage,
    kth_power_local_solutions,
    power_subgroup,
    qr_local_solutions,
    qr_sum_diff_full,
    zero_in_f_of_qr,
)
from linform.smallsets import ap_equality_set, classify_triples, conjugate_four_set_witness, five_set_witness

MSTD = FiniteIntSet((0, 2, 3, 4, 7, 11, 12, 14))

HAND_PICKED = [
    ResidueSet(13, [0, 1, 6, 7, 9, 11]),
    ResidueSet(15, [0, 1, 5, 6, 10, 11, 13]),
    ResidueSet(16, [0, 1, 3, 5, 7, 9, 11, 13, 15]),
    ResidueSet(19, [0, 1, 11, 12, 14, 16, 18]),
]


def _passed(criterion: str, elapsed: float, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: PASS in {elapsed:.3f}s - {detail}")


def coprime_pairs(max_u, min_u=2):
    for u in range(min_u, max_u + 1):
        for v in range(1, u):
            if math.gcd(u, v) == 1:
                yield u, v


def normalized_forms(max_u, min_u=1):
    for u in range(min_u, max_u + 1):
        top = 2 if u == 1 else u
        for v in range(1, top):
            if math.gcd(u, v) == 1:
                yield LinearForm((u, v))
                yield LinearForm((u, -v))


def test_acceptance_1_mstd_counterexample():
    image_cardinality(SUM, MSTD)  # warm the kernels before timing
    start = time.perf_counter()
    diffs = image_cardinality(DIFFERENCE, MSTD)
    sums = image_cardinality(SUM, MSTD)
    elapsed = time.perf_counter() - start
    assert diffs == 25
    assert sums == 26
    assert elapsed < 0.001, f"took {elapsed * 1000:.3f} ms, budget 1 ms"
    _passed("1", elapsed, "|A-A|=25, |A+A|=26")


def test_acceptance_2_crt_reproduction_bit_exact():
    f = LinearForm((2, 1))
    start = time.perf_counter()
    locs = [local_solution(f, SUM, r) for r in HAND_PICKED]
    report = build_separating_set(f, SUM, locs, window_start=1, direct=True)
    elapsed = time.perf_counter() - start
    assert report.combined_modulus == 59280
    assert report.set_size == 2646
    assert len(report.elements) == 2646
    assert report.f_card == 108014
    assert report.g_card == 114575
    assert elapsed < 5.0, f"took {elapsed:.2f} s, budget 5 s"
    _passed("2", elapsed, "|A|=2646, |f(A)|=108014, |s(A)|=114575")


def test_acceptance_3_triple_classification_exhaustive():
    start = time.perf_counter()
    forms = 0
    for form in normalized_forms(10, min_u=2):
        u, v = form.coefficients
        result = classify_triples(form)
        got = {s.elements: c for s, c in zip(result.exceptional_canonicals, result.cardinalities)}
        if u == 2:
            expected = {(0, 1, 2): 7, (0, 1, 3): 8}
        else:
            expected = {
                canonical_pair(FiniteIntSet((0, abs(v), u))).elements: 8,
                canonical_pair(FiniteIntSet((0, abs(v), u + abs(v)))).elements: 8,
            }
        assert got == expected, f"form {form.coefficients}: {got} != {expected}"
        forms += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.2f} s, budget 10 s"
    _passed("3", elapsed, f"{forms} normalized forms, two exceptional families each")


def test_acceptance_4_four_element_witnesses():
    start = time.perf_counter()
    pairs = 0
    for u, v in coprime_pairs(20):
        w = conjugate_four_set_witness(u, v)
        expected = (13, 12, 13, 14) if u == 2 else (14, 13, 13, 14)
        assert (w.f_of_a, w.g_of_a, w.f_of_b, w.g_of_b) == expected
        pairs += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f} s, budget 1 s"
    _passed("4", elapsed, f"{pairs} coprime pairs, patterns exact")


def test_acceptance_5_five_element_witnesses():
    start = time.perf_counter()
    pairs = 0
    for u, v in coprime_pairs(50):
        _, card_f, card_d = five_set_witness(u, v)
        assert card_d == 21 and card_f <= 19
        pairs += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f} s, budget 5 s"
    _passed("5", elapsed, f"{pairs} coprime pairs, |d(A)|=21 and |f(A)|<=19")


def test_acceptance_6_progression_equality():
    start = time.perf_counter()
    cases = 0
    for u, v in coprime_pairs(12):
        for t in range(1, u + 1):
            a = ap_equality_set(u, v, t)
            assert image_cardinality(LinearForm((u, v)), a) == t * t
            assert image_cardinality(LinearForm((u, -v)), a) == t * t
            cases += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f} s, budget 1 s"
    _passed("6", elapsed, f"{cases} progressions, |f| = |g| = t^2")


def test_acceptance_7_amplification_squares():
    start = time.perf_counter()
    rng = random.Random(424242)
    nonzero = [c for c in range(-5, 6) if c != 0]
    for _ in range(20):
        a = FiniteIntSet(rng.sample(range(-60, 60), rng.randint(1, 12)))
        f = LinearForm((rng.choice(nonzero), rng.choice(nonzero)))
        g = LinearForm((rng.choice(nonzero), rng.choice(nonzero)))
        fa, ga = image_cardinality(f, a), image_cardinality(g, a)
        _, amplified = amplify(f, g, a)
        assert len(amplified) == len(a) ** 2
        assert image_cardinality(f, amplified) == fa * fa
        assert image_cardinality(g, amplified) == ga * ga
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f} s, budget 5 s"
    _passed("7", elapsed, "20 random instances, all three cardinalities squared")


def test_acceptance_8_crt_multiplicativity_and_sandwich():
    start = time.perf_counter()
    rng = random.Random(88)
    nonzero = [c for c in range(-10, 11) if c != 0]
    for _ in range(100):
        while True:
            m1, m2 = rng.randint(2, 50), rng.randint(2, 50)
            if math.gcd(m1, m2) == 1:
                break
        r1 = ResidueSet(m1, rng.sample(range(m1), rng.randint(1, m1)))
        r2 = ResidueSet(m2, rng.sample(range(m2), rng.randint(1, m2)))
        f = LinearForm((rng.choice(nonzero), rng.choice(nonzero)))
        combined = crt_product([r1, r2])
        assert len(combined) == len(r1) * len(r2)
        assert len(modular_image(f, combined)) == (
            len(modular_image(f, r1)) * len(modular_image(f, r2))
        )
    for _ in range(100):
        m = rng.randint(2, 80)
        r = ResidueSet(m, rng.sample(range(m), rng.randint(1, m)))
        f = LinearForm((rng.choice(nonzero), rng.choice(nonzero)))
        f_mod = len(modular_image(f, r))
        for window in (0, 1):
            f_int = image_cardinality(f, rectify(r, window))
            assert f_mod <= f_int <= 2 * f.height * f_mod
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f} s, budget 5 s"
    _passed("8", elapsed, "100 multiplicativity + 100 sandwich instances, exact")


def test_acceptance_9_quadratic_residue_theorems():
    start = time.perf_counter()
    full_checks = 0
    for p in primes_between(13, 997):
        if p % 4 == 1:
            assert qr_sum_diff_full(p)
            full_checks += 1
    zero_checks = 0
    for p in primes_between(3, 200):
        for form in normalized_forms(10):
            u, v = form.coefficients
            if u % p == 0 or v % p == 0:
                continue
            assert zero_in_f_of_qr(u, v, p) == (jacobi(-u * v, p) == 1)
            zero_checks += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.2f} s, budget 30 s"
    _passed("9", elapsed, f"{full_checks} coverage primes, {zero_checks} zero-membership cases")


def test_acceptance_10_power_subgroup_coverage():
    start = time.perf_counter()
    sample_forms = [SUM, DIFFERENCE, LinearForm((2, 1)), LinearForm((3, 2))]
    reports = 0
    rng = random.Random(1010)
    for k in (2, 3):
        for p in primes_between(k**4 + 1, 2000):
            if (p - 1) % k != 0:
                continue
            subgroup = power_subgroup(p, k)
            for form in sample_forms:
                u, v = form.coefficients
                if u % p == 0 or v % p == 0:
                    continue
                report = coverage(form, subgroup)
                assert report.covered_nonzero, (p, k, form.coefficients)
                counts = report.representation_counts
                assert sum(counts) == subgroup.order ** 2
                x = rng.randrange(1, p)
                h = rng.choice(subgroup.classes)
                assert counts[x] == counts[x * h % p]
                reports += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f} s, budget 60 s"
    _passed("10", elapsed, f"{reports} coverage reports, all nonzero classes represented")


def test_acceptance_11a_pipeline_qr_source():
    f = LinearForm((2, 1))
    locs = qr_local_solutions(2, 1, count=5)
    assert len(locs) == 5
    # local certificates: verified residue data with exact cardinalities
    for sol in locs:
        p = sol.residues.modulus
        assert p % 4 == 1 and p > 5 and jacobi(-2, p) == -1
        assert sol.f_card == p - 1 and sol.g_card == p
        assert list(sol.residues.classes) == sorted({x * x % p for x in range(1, p)})
        assert sol.f_card == len(modular_image(f, sol.residues))
    report = build_separating_set(f, SUM, locs)
    # exact-rational threshold logic
    assert report.threshold == Fraction(1, 6)
    expected_product = math.prod((loc.ratio for loc in report.locals_used), start=Fraction(1))
    assert report.ratio_product == expected_product
    assert report.threshold_met == (report.ratio_product < Fraction(1, 6))
    # the criterion: a report establishing |f(A)| < |g(A)|
    assert report.success and report.f_card is not None and report.f_card < report.g_card, (
        "pipeline did not establish |f(A)| < |s(A)|: "
        f"mode={report.mode}, ratio product={report.ratio_product} "
        f"(threshold 1/6), detail: {report.detail}"
    )
    _passed("11a", 0.0, f"|f(A)|={report.f_card} < |s(A)|={report.g_card}")


def test_acceptance_11b_pipeline_kpower_source():
    f = LinearForm((2, 1))
    locs = kth_power_local_solutions(2, 1, count=2)
    assert len(locs) == 2
    for sol in locs:
        p = sol.residues.modulus
        assert p % 3 == 1 and p > 81
        assert pow(-4, (p - 1) // 3, p) != 1
        assert sol.f_card == p - 1 and sol.g_card == p
    report = build_separating_set(f, DIFFERENCE, locs)
    assert report.threshold == Fraction(1, 6)
    expected_product = math.prod((loc.ratio for loc in report.locals_used), start=Fraction(1))
    assert report.ratio_product == expected_product
    assert report.success and report.f_card is not None and report.f_card < report.g_card, (
        "pipeline did not establish |f(A)| < |d(A)|: "
        f"mode={report.mode}, ratio product={report.ratio_product} "
        f"(threshold 1/6), detail: {report.detail}"
    )
    _passed("11b", 0.0, f"|f(A)|={report.f_card} < |d(A)|={report.g_card}")
