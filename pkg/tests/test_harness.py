"""Generator families, branch combinatorics, separation, and the bootstrap chain."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlab.norms import product_norm_upper
from blochlab.series import DensePolynomial, SparseSeries
from blochlab.harness import (
    GeneratorFamily,
    block_family,
    boundary_radius_grid,
    bootstrap_step_check,
    branch_codes,
    branch_digits,
    branch_family,
    branch_intersection_depth,
    branch_residual,
    exp_radius_grid,
    lacunary_corpus,
    random_polynomials,
    scale_polynomials_to_unit,
    separation_lower_bound,
    separation_scan,
    table_family,
    trial_polynomials,
    u_set_measure,
)
from blochlab.tables import build_exponent_table

E_HALF = math.exp(-0.5)

dyadics = st.builds(
    lambda num, k: Fraction(num, 1 << k), st.integers(0, 255), st.just(8)
)


class TestBranchCombinatorics:
    def test_endpoint_codes(self):
        assert branch_codes(0, 5) == [2, 4, 8, 16, 32]
        assert branch_codes(1, 5) == [3, 7, 15, 31, 63]

    def test_digits(self):
        assert branch_digits(Fraction(1, 2), 4) == (1, 0, 0, 0)
        assert branch_digits(Fraction(3, 8), 5) == (0, 1, 1, 0, 0)
        assert branch_digits(1, 3) == (1, 1, 1)
        with pytest.raises(ValueError):
            branch_digits(Fraction(1, 2), 0)
        with pytest.raises(ValueError):
            branch_digits(2, 3)

    def test_intersection_depth(self):
        assert branch_intersection_depth(0, Fraction(1, 4), 6) == 1
        assert branch_intersection_depth(0, Fraction(1, 2), 6) == 0
        assert branch_intersection_depth(Fraction(3, 8), Fraction(3, 8), 6) == 6

    def test_shared_codes_match_shared_prefix(self):
        a, b = Fraction(1, 8), Fraction(3, 16)
        d = branch_intersection_depth(a, b, 8)
        shared = set(branch_codes(a, 8)) & set(branch_codes(b, 8))
        assert shared == set(branch_codes(a, 8)[:d])

    def test_eighths_residual(self):
        eighths = [Fraction(i, 8) for i in range(8)]
        residual, d_max = branch_residual(eighths, 6)
        assert d_max == 2
        assert len(residual) == 4
        assert residual == sorted(residual)

    @given(alphas=st.lists(dyadics, min_size=2, max_size=6, unique=True))
    @settings(max_examples=40, deadline=None)
    def test_residual_size_floor(self, alphas):
        depth = 12
        residual, d_max = branch_residual(alphas, depth)
        assert len(residual) >= depth - d_max

    def test_residual_needs_two(self):
        with pytest.raises(ValueError):
            branch_residual([0], 4)


class TestFamilies:
    def test_table_family_structure(self, triangle12):
        fam = table_family(triangle12, (1, 2), 8)
        assert fam.size == 2
        assert fam.kind == "table_rows"
        assert fam.labels == ("column 1", "column 2")
        assert fam.positions[0] == tuple((n, 1) for n in range(1, 9))
        assert fam.positions[1] == tuple((n, 2) for n in range(2, 9))
        for f in fam.functions:
            assert f.constant == 1.0

    def test_table_family_validation(self, triangle12):
        with pytest.raises(ValueError):
            table_family(triangle12, (1,), 0)
        with pytest.raises(ValueError):
            table_family(triangle12, (1,), 13)
        with pytest.raises(ValueError):
            table_family(triangle12, (9,), 8)

    def test_family_requires_unit_constant(self, triangle12):
        bad = SparseSeries(0.0, [1.0], [5])
        with pytest.raises(ValueError):
            GeneratorFamily(
                functions=(bad,),
                labels=("x",),
                kind="table_rows",
                table=triangle12,
                positions=(((5, 1),),),
            )

    def test_branch_family_rank_mapping(self):
        eighths = [Fraction(i, 8) for i in range(8)]
        union = set()
        for a in eighths:
            union |= set(branch_codes(a, 6))
        col = build_exponent_table(len(union), max_columns=1)
        fam = branch_family(eighths, col, 6)
        assert fam.size == 8
        assert all(len(pos) == 6 for pos in fam.positions)
        # Shared prefixes share table rows: 0 and 1/8 agree to depth 2.
        rows_0 = {p[0] for p in fam.positions[0]}
        rows_18 = {p[0] for p in fam.positions[1]}
        assert len(rows_0 & rows_18) == 2

    def test_branch_family_validation(self):
        col = build_exponent_table(5, max_columns=1)
        with pytest.raises(ValueError):
            branch_family([0, Fraction(0, 8)], col, 3)
        with pytest.raises(ValueError):
            branch_family([0, 1], col, 4)  # union needs 8 rows, table has 5

    def test_block_family_term_counts(self, relaxed_block):
        fam = block_family(relaxed_block, (1, 2))
        assert fam.kind == "block_little"
        for k, i in enumerate((1, 2)):
            expected = sum(
                relaxed_block.entry(i, j) + 1 for j in range(i, 5)
            )
            assert len(fam.positions[k]) == expected
            assert fam.functions[k].membership_hint == "little_bloch"

    def test_block_family_validation(self, relaxed_block):
        with pytest.raises(ValueError):
            block_family(relaxed_block, (5,))


class TestRandomPolynomials:
    def test_trials_are_deterministic(self):
        a = trial_polynomials(0, 7, 3)
        b = trial_polynomials(0, 7, 3)
        assert [p.coeffs for p in a] == [p.coeffs for p in b]
        c = trial_polynomials(0, 8, 3)
        assert [p.coeffs for p in a] != [p.coeffs for p in c]

    def test_first_is_normalized(self):
        for trial in range(5):
            polys = trial_polynomials(3, trial, 4, max_degree=6)
            assert polys[0].at_zero() == 1.0 + 0j
            assert all(p.degree <= 6 for p in polys)

    def test_validation(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            random_polynomials(rng, 0)


class TestSeparation:
    def test_deep_row_recovers_limit_constant(self, triangle24):
        fam = table_family(triangle24, (1,), 24)
        report = separation_lower_bound(fam, [DensePolynomial([1.0])], 0, 20)
        assert report.lhs == pytest.approx(0.6065306597126339, rel=1e-12)
        assert report.main_term == pytest.approx(report.lhs, rel=1e-9)
        assert report.error_budget < 1e-5
        assert report.ratio == report.lhs  # p0(0) = 1
        assert report.decomposition_ok and not report.vacuous
        assert report.position == (20, 1)

    def test_scan_stays_at_limit(self, triangle24):
        fam = table_family(triangle24, (1,), 24)
        reports = separation_scan(
            fam, [DensePolynomial([1.0])], 0, [16, 20, 24], ratio_threshold=0.55
        )
        for report in reports:
            assert report.passed
            assert report.ratio == pytest.approx(E_HALF, abs=1e-4)

    def test_random_trials_clear_threshold(self, triangle24):
        fam = table_family(triangle24, (1, 2, 3), 24)
        for trial in range(3):
            polys = trial_polynomials(0, trial, 3)
            report = separation_lower_bound(
                fam, polys, 0, 24, ratio_threshold=0.55
            )
            assert report.passed
            assert report.decomposition_ok
            assert report.ratio >= 0.55

    def test_vacuous_base_point(self, triangle24):
        fam = table_family(triangle24, (1, 2), 24)
        polys = [DensePolynomial([0.0, 1.0]), DensePolynomial([1.0])]
        report = separation_lower_bound(fam, polys, 0, 20, ratio_threshold=0.55)
        assert report.vacuous
        assert report.ratio == math.inf
        assert report.passed == report.decomposition_ok

    def test_threshold_failure_reported(self, triangle24):
        fam = table_family(triangle24, (1,), 24)
        report = separation_lower_bound(
            fam, [DensePolynomial([1.0])], 0, 20, ratio_threshold=5.0
        )
        assert report.decomposition_ok
        assert not report.passed

    def test_validation(self, triangle24, relaxed_block):
        fam = table_family(triangle24, (1,), 24)
        with pytest.raises(ValueError):
            separation_lower_bound(fam, [], 0, 20)
        with pytest.raises(ValueError):
            separation_lower_bound(fam, [DensePolynomial([1.0])], 0, 25)
        bfam = block_family(relaxed_block, (1,))
        with pytest.raises(TypeError):
            separation_lower_bound(bfam, [DensePolynomial([1.0])], 0, 1)


class TestLargenessSets:
    def test_polynomial_gate(self, relaxed_block):
        fam = block_family(relaxed_block, (1, 2))
        zero = DensePolynomial([0.0])
        one = DensePolynomial([1.0])
        four = DensePolynomial([4.0])
        assert u_set_measure(fam, zero, 1, 2, 1 << 14, 2.31) == 0.0
        assert u_set_measure(fam, one, 1, 2, 1 << 14, 2.31) == 0.0
        big = u_set_measure(fam, four, 1, 2, 1 << 14, 2.31)
        # With the gate wide open this is the block exceedance itself.
        assert big >= 1.0 - 2.0**-7
        assert big == pytest.approx(0.99462890625, abs=1e-9)

    def test_needs_block_family(self, triangle12):
        fam = table_family(triangle12, (1,), 8)
        with pytest.raises(TypeError):
            u_set_measure(fam, DensePolynomial([1.0]), 1, 2, 1 << 8, 2.31)


class TestScaleToUnit:
    def test_scaling_certifies_unit_norm(self, relaxed_block):
        fam = block_family(relaxed_block, (1, 2))
        polys = trial_polynomials(0, 0, 2, max_degree=4)
        scaled, nu = scale_polynomials_to_unit(fam, polys)
        assert nu > 1.0
        post = sum(product_norm_upper(p, f) for p, f in zip(scaled, fam.functions))
        assert post <= 1.0

    def test_small_input_passes_through(self, relaxed_block):
        fam = block_family(relaxed_block, (1,))
        polys = [DensePolynomial([1e-12])]
        scaled, nu = scale_polynomials_to_unit(fam, polys)
        assert nu <= 1.0
        assert scaled[0] is polys[0]

    def test_length_mismatch(self, relaxed_block):
        fam = block_family(relaxed_block, (1, 2))
        with pytest.raises(ValueError):
            scale_polynomials_to_unit(fam, [DensePolynomial([1.0])])


class TestBootstrapChain:
    def _family_and_polys(self, relaxed_block):
        fam = block_family(relaxed_block, (1, 2))
        polys, _ = scale_polynomials_to_unit(
            fam, trial_polynomials(0, 0, 2, max_degree=4)
        )
        return fam, polys

    def test_full_chain_passes(self, relaxed_block):
        fam, polys = self._family_and_polys(relaxed_block)
        report = bootstrap_step_check(fam, polys, 3, 2.31, n_samples=1 << 13)
        assert report.passed
        assert report.failed_links == ()
        assert report.J == 3
        assert report.p0_target == 4.0
        assert report.norm_certificate <= 1.0
        assert len(report.hypotheses) == len(report.links) == 2
        for hyp in report.hypotheses:
            assert hyp["u_measure_J_ok"] and hyp["lp_next_ok"]
        for link in report.links:
            assert link["measure_A_ok"] and link["lp_level_J_ok"]
            assert link["block_moment_ok"] and link["u_measure_prev_ok"]
            assert link["jensen_ok"] and link["exp_mean_ok"]
            assert link["jensen_lhs"] <= link["exp_mean"] * (1 + 1e-12)

    def test_corrected_split_is_weaker(self, relaxed_block):
        # The corrected exceptional-measure exponent 2**-(J+1) sits closer
        # to 1 than the square root, so the corrected right side dominates.
        fam, polys = self._family_and_polys(relaxed_block)
        report = bootstrap_step_check(fam, polys, 3, 2.31, n_samples=1 << 12)
        for link in report.links:
            if 0.0 < link["measure_A"] < 1.0:
                assert link["split_corrected_rhs"] >= link["split_paper_rhs"]

    def test_reruns_are_exact(self, relaxed_block):
        fam, polys = self._family_and_polys(relaxed_block)
        a = bootstrap_step_check(fam, polys, 3, 2.31, n_samples=1 << 12)
        b = bootstrap_step_check(fam, polys, 3, 2.31, n_samples=1 << 12)
        assert a.links == b.links
        assert a.hypotheses == b.hypotheses

    def test_validation(self, relaxed_block, triangle12):
        fam, polys = self._family_and_polys(relaxed_block)
        with pytest.raises(ValueError):
            bootstrap_step_check(fam, polys, 21, 2.31)
        with pytest.raises(ValueError):
            bootstrap_step_check(fam, polys, 2, 2.31)  # J must exceed rows
        with pytest.raises(ValueError):
            bootstrap_step_check(fam, polys, 4, 2.31)  # needs column 5
        with pytest.raises(ValueError):
            bootstrap_step_check(fam, polys[:1], 3, 2.31)
        raw = trial_polynomials(0, 0, 2, max_degree=4)
        with pytest.raises(ValueError, match="scale"):
            bootstrap_step_check(fam, raw, 3, 2.31)
        tf = table_family(triangle12, (1,), 8)
        with pytest.raises(TypeError):
            bootstrap_step_check(tf, [DensePolynomial([1.0])], 3, 2.31)


class TestGridsAndCorpus:
    def test_boundary_grid(self):
        grid = boundary_radius_grid()
        assert len(grid) == 64
        values = [r.to_float() for r in grid]
        assert values[0] == pytest.approx(math.tanh(1.0), rel=1e-12)
        assert all(b > a for a, b in zip(values, values[1:]))
        assert 1.0 - values[-1] == pytest.approx(1e-6, rel=1e-6)

    def test_exp_grid_starts_on_validity_floor(self):
        grid = exp_radius_grid(16)
        assert grid[0].log_inv_gap() == 1.0  # exactly, in float arithmetic
        gaps = [r.log_inv_gap() for r in grid]
        assert all(b > a for a, b in zip(gaps, gaps[1:]))

    def test_lacunary_corpus_certificates(self):
        corpus = lacunary_corpus(6)
        assert len(corpus) == 6
        from blochlab.norms import coeff_norm_upper

        lengths = [len(list(f.terms())) for f in corpus]
        assert lengths[0] == 9  # start block: indices 8..16
        assert all(b > a for a, b in zip(lengths, lengths[1:]))
        for f in corpus:
            assert coeff_norm_upper(f) <= 1.0
