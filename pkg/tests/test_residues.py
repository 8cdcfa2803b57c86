"""Tests for quadratic-residue and k-th power subgroup constructions."""

from __future__ import annotations

from collections import Counter
from itertools import product

import pytest

from linform.intsets import DIFFERENCE, SUM, LinearForm
from linform.modular import build_separating_set, modular_image
from linform.numtheory import jacobi, primes_between
from linform.residues import (
    choose_power_exponent,
    coverage,
    kth_power_local_solutions,
    power_subgroup,
    qr_local_solutions,
    qr_sum_diff_full,
    quadratic_residues,
    zero_in_f_of_qr,
)


class TestPowerSubgroup:
    def test_squares_mod_13(self):
        assert quadratic_residues(13).classes == (1, 3, 4, 9, 10, 12)

    def test_squares_mod_5(self):
        assert quadratic_residues(5).classes == (1, 4)

    def test_membership_matches_jacobi(self):
        for p in primes_between(3, 97):
            qr = quadratic_residues(p)
            for a in range(1, p):
                assert (a in qr) == (jacobi(a, p) == 1), (a, p)

    def test_cubes_mod_13(self):
        h = power_subgroup(13, 3)
        assert h.classes == (1, 5, 8, 12)
        assert h.order == 4

    def test_k_one_is_everything(self):
        assert power_subgroup(13, 1).classes == tuple(range(1, 13))

    def test_order_97_3(self):
        assert power_subgroup(97, 3).order == 32

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            power_subgroup(12, 2)
        with pytest.raises(ValueError):
            power_subgroup(13, 5)  # 5 does not divide 12
        with pytest.raises(ValueError):
            quadratic_residues(2)

    def test_closure_under_product_and_inverse(self):
        for p, k in ((13, 2), (13, 3), (31, 5), (97, 3), (101, 2), (211, 7)):
            h = power_subgroup(p, k)
            assert h.order <= 200
            classes = set(h.classes)
            assert 1 in classes
            for a in classes:
                assert pow(a, -1, p) in classes
                for b in classes:
                    assert a * b % p in classes


class TestQrTheorems:
    def test_sum_diff_full_examples(self):
        assert qr_sum_diff_full(13)
        assert qr_sum_diff_full(17)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            qr_sum_diff_full(5)  # excluded: p > 5 required
        with pytest.raises(ValueError):
            qr_sum_diff_full(7)  # 3 (mod 4) not claimed
        with pytest.raises(ValueError):
            qr_sum_diff_full(15)

    def test_zero_membership_examples(self):
        assert not zero_in_f_of_qr(2, 1, 13)
        assert zero_in_f_of_qr(1, 1, 13)

    def test_difference_always_contains_zero(self):
        for p in (3, 7, 13, 29):
            assert zero_in_f_of_qr(1, -1, p)

    def test_zero_membership_matches_jacobi_sample(self):
        for p in primes_between(3, 60):
            for u, v in ((1, 1), (2, 1), (3, -2), (5, 3)):
                if u % p == 0 or v % p == 0:
                    continue
                assert zero_in_f_of_qr(u, v, p) == (jacobi(-u * v, p) == 1), (u, v, p)

    def test_rejects_dividing_prime(self):
        with pytest.raises(ValueError):
            zero_in_f_of_qr(13, 1, 13)


class TestCoverage:
    def test_two_one_mod_97_cubes(self):
        report = coverage(LinearForm((2, 1)), power_subgroup(97, 3))
        assert report.covered_nonzero
        assert not report.zero_covered

    def test_sum_reaches_zero_for_odd_k(self):
        report = coverage(SUM, power_subgroup(97, 3))
        assert report.zero_covered

    def test_difference_always_reaches_zero(self):
        for p, k in ((97, 3), (17, 2), (31, 5)):
            report = coverage(DIFFERENCE, power_subgroup(p, k))
            assert report.zero_covered

    def test_counts_match_brute_force(self):
        for p, k, coeffs in ((13, 2, (2, 1)), (13, 3, (1, 1)), (31, 5, (3, -2))):
            h = power_subgroup(p, k)
            expected = Counter(
                (coeffs[0] * h1 + coeffs[1] * h2) % p
                for h1, h2 in product(h.classes, repeat=2)
            )
            report = coverage(LinearForm(coeffs), h)
            assert list(report.representation_counts) == [expected.get(x, 0) for x in range(p)]

    def test_counts_sum_to_order_squared(self):
        report = coverage(LinearForm((3, 2)), power_subgroup(101, 2))
        assert sum(report.representation_counts) == 50 * 50

    def test_coset_constancy_visible_in_counts(self):
        p, k = 31, 3
        h = power_subgroup(p, k)
        report = coverage(LinearForm((2, 1)), h)
        counts = report.representation_counts
        for x in range(1, p):
            for hh in h.classes:
                assert counts[x] == counts[x * hh % p]

    def test_rejects_dividing_prime_and_tiny_subgroups(self):
        with pytest.raises(ValueError):
            coverage(LinearForm((97, 1)), power_subgroup(97, 3))
        with pytest.raises(ValueError):
            coverage(SUM, power_subgroup(13, 12))  # order 1


class TestQrLocalSolutions:
    def test_two_one_first_three(self):
        sols = qr_local_solutions(2, 1, 3)
        moduli = [s.residues.modulus for s in sols]
        assert moduli == [13, 29, 37]
        assert all(p % 8 == 5 for p in moduli)
        for sol in sols:
            p = sol.residues.modulus
            assert sol.residues == quadratic_residues(p).residue_set()
            assert sol.f_card == p - 1
            assert sol.g_card == p

    def test_three_one_primes_satisfy_the_symbol_condition(self):
        for sol in qr_local_solutions(3, 1, 4):
            p = sol.residues.modulus
            assert p % 4 == 1 and p > 5
            assert jacobi(-3, p) == -1

    def test_square_uv_rejected(self):
        with pytest.raises(ValueError):
            qr_local_solutions(4, 1, 1)
        with pytest.raises(ValueError):
            qr_local_solutions(9, -4, 1)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            qr_local_solutions(1, 2, 1)

    def test_shortfall_returns_fewer(self):
        sols = qr_local_solutions(2, 1, 10, search_limit=40)
        assert [s.residues.modulus for s in sols] == [13, 29, 37]


class TestKthPowerLocalSolutions:
    def test_exponent_selection(self):
        assert choose_power_exponent(2, 1) == (3, -4)
        assert choose_power_exponent(2, -1) == (3, 4)
        assert choose_power_exponent(3, 2) == (3, -18)
        # u = 8: -u^2*v = -64 is a cube, so q = 3 is unusable
        assert choose_power_exponent(8, 1)[0] == 5

    def test_two_one_first_prime_is_97(self):
        sols = kth_power_local_solutions(2, 1, 2)
        assert [s.residues.modulus for s in sols] == [97, 103]
        for sol in sols:
            p = sol.residues.modulus
            assert p % 3 == 1 and p > 81
            assert sol.f_card == p - 1 and sol.g_card == p
            assert sol.residues == power_subgroup(p, 3).residue_set()

    def test_three_two_conditions(self):
        for sol in kth_power_local_solutions(3, 2, 3):
            p = sol.residues.modulus
            assert p % 3 == 1 and p > 81
            assert pow(-18, (p - 1) // 3, p) != 1

    def test_rejects_sum_and_difference_shapes(self):
        with pytest.raises(ValueError):
            kth_power_local_solutions(1, 1, 1)
        with pytest.raises(ValueError):
            kth_power_local_solutions(1, -1, 1)

    def test_shortfall_returns_fewer(self):
        sols = kth_power_local_solutions(2, 1, 5, search_limit=100)
        assert [s.residues.modulus for s in sols] == [97]


class TestPipelineMechanics:
    def test_qr_locals_compose_with_the_builder(self):
        locs = qr_local_solutions(2, 1, 2)
        report = build_separating_set(LinearForm((2, 1)), SUM, locs)
        assert len(report.locals_used) >= 1
        assert report.threshold.denominator == 6
        expected = locs[0].ratio * locs[1].ratio
        if len(report.locals_used) == 2:
            assert report.ratio_product == expected

    def test_kpower_locals_compose_with_the_builder(self):
        locs = kth_power_local_solutions(2, 1, 2)
        report = build_separating_set(LinearForm((2, 1)), DIFFERENCE, locs)
        assert report.combined_modulus in (97, 97 * 103)
        assert report.mode in ("threshold", "direct", "shortfall")
