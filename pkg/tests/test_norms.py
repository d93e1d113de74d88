"""Norm certificates, circle seminorms, and the growth-rate inequality checks."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlab.norms import (
    GROWTH_RADIUS_FLOOR,
    bloch_norm_lower,
    circle_seminorm,
    coeff_norm_upper,
    growth_bound_check,
    little_bloch_profile,
    lp_mean,
    makarov_exp_check,
    makarov_moment_check,
    product_norm_upper,
)
from blochlab.series import (
    DensePolynomial,
    RadiusSpec,
    SparseSeries,
    block_radius,
    eval_circle,
    gap_block,
    monomial_seminorm_max,
    product_series,
    radial_block_sum,
)


def small_series():
    """Series with a handful of moderate terms at exponents up to 60."""
    term = st.tuples(
        st.integers(1, 60),
        st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    )
    def build(pairs, const):
        seen = {}
        for e, c in pairs:
            seen[e] = seen.get(e, 0) + c
        items = sorted((e, c) for e, c in seen.items() if c != 0)
        return SparseSeries(const, [c for _, c in items], [e for e, _ in items])
    return st.builds(
        build,
        st.lists(term, min_size=1, max_size=5),
        st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    )


class TestCoefficientCertificate:
    def test_single_monomial(self):
        assert coeff_norm_upper(SparseSeries(0.0, [1.0], [1])) == 1.0
        f2 = SparseSeries(2.0, [1.0], [2])
        # sup of (1 - r**2) * 2r sits at r = 1/sqrt(3).
        expected = 2.0 + 4.0 / (3.0 * math.sqrt(3.0))
        assert coeff_norm_upper(f2) == pytest.approx(expected, rel=1e-12)

    def test_constant_only(self):
        assert coeff_norm_upper(SparseSeries(3 + 4j, [], [])) == 5.0

    @given(f=small_series())
    @settings(max_examples=40, deadline=None)
    def test_dominates_sampled_lower_bound(self, f):
        radii = [RadiusSpec.plain(x) for x in (0.0, 0.3, 0.6, 0.9, 0.99)]
        lower = bloch_norm_lower(f, radii, n_samples=1 << 10)
        assert lower.kind == "lower_bound"
        assert lower.value <= coeff_norm_upper(f) * (1.0 + 1e-9) + 1e-12

    def test_lower_bound_grid_monotone(self):
        f = gap_block(2)
        base = [RadiusSpec.plain(x) for x in (0.5, 0.9)]
        more = base + [RadiusSpec.plain(0.97)]
        v1 = bloch_norm_lower(f, base, n_samples=1 << 8).value
        v2 = bloch_norm_lower(f, more, n_samples=1 << 8).value
        v3 = bloch_norm_lower(f, more, n_samples=1 << 9).value
        assert v1 <= v2 <= v3

    def test_empty_radii_rejected(self):
        with pytest.raises(ValueError):
            bloch_norm_lower(gap_block(1), [])


class TestProductCertificate:
    def test_constant_multiplier_is_exact(self):
        p = DensePolynomial([2.0])
        f = SparseSeries(0.0, [1.0], [1])
        assert product_norm_upper(p, f) == 2.0
        assert coeff_norm_upper(product_series(p, f)) == 2.0

    @given(
        f=small_series(),
        pcoeffs=st.lists(
            st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
            min_size=1,
            max_size=4,
        ),
    )
    @settings(max_examples=40, deadline=None)
    def test_dominates_expanded_product(self, f, pcoeffs):
        p = DensePolynomial(pcoeffs)
        expanded = coeff_norm_upper(product_series(p, f))
        assert expanded <= product_norm_upper(p, f) * (1.0 + 1e-12) + 1e-12


class TestCircleSeminorm:
    def test_origin_reads_linear_coefficient(self):
        f = SparseSeries(7.0, [2 + 1j, 1.0], [1, 5])
        assert circle_seminorm(f, RadiusSpec.plain(0.0)) == pytest.approx(
            math.sqrt(5.0)
        )
        assert circle_seminorm(gap_block(1), RadiusSpec.plain(0.0)) == 0.0

    def test_matches_monomial_formula(self):
        f = SparseSeries(0.0, [1.0], [7])
        r = RadiusSpec.plain(0.8)
        got = circle_seminorm(f, r, n_samples=1 << 8)
        assert got == pytest.approx((1 - 0.64) * 7 * 0.8**6, rel=1e-12)


class TestLpMeans:
    def test_frozen_block_value(self):
        samples = eval_circle(gap_block(1), RadiusSpec.plain(8 / 9), 1 << 16)
        assert lp_mean(samples, 2.0) == pytest.approx(0.7831286313948747, rel=1e-12)

    def test_square_mean_matches_coefficient_route(self):
        # Exact orthogonality on the sampling grid: the quadratic mean of a
        # gap series equals the radial coefficient sum.
        r = RadiusSpec.plain(8 / 9)
        samples = eval_circle(gap_block(1), r, 1 << 16)
        assert lp_mean(samples, 2.0) ** 2 == pytest.approx(
            radial_block_sum(1, r, 2.0), rel=1e-10
        )

    def test_holder_monotone_in_p(self):
        samples = eval_circle(gap_block(3), RadiusSpec.plain(0.95), 1 << 12)
        means = [lp_mean(samples, p) for p in (1.0, 2.0, 4.0, 8.0)]
        assert all(b >= a for a, b in zip(means, means[1:]))

    def test_validation_and_zero(self):
        samples = eval_circle(gap_block(1), RadiusSpec.plain(0.5), 1 << 8)
        with pytest.raises(ValueError):
            lp_mean(samples, 0.5)
        zero = eval_circle(SparseSeries(0.0, [], []), RadiusSpec.plain(0.5), 1 << 8)
        assert lp_mean(zero, 2.0) == 0.0


class TestGrowthBound:
    def test_radius_floor_enforced(self):
        f = SparseSeries(0.0, [1.0], [1])
        with pytest.raises(ValueError):
            growth_bound_check(f, 1.0, [RadiusSpec.plain(0.5)])
        with pytest.raises(ValueError):
            growth_bound_check(f, 1.0, [])
        assert GROWTH_RADIUS_FLOOR == pytest.approx(math.tanh(1.0))

    def test_certified_norm_passes(self):
        f = SparseSeries(0.0, [1.0], [1])
        radii = [RadiusSpec.plain(0.8), RadiusSpec.plain(0.99)]
        report = growth_bound_check(f, 1.0, radii, n_samples=1 << 10)
        assert report.passed
        assert report.max_ratio < 1.0
        assert report.checked_points == 2 << 10
        assert report.violations == ()

    def test_understated_norm_is_caught(self):
        # The identity map with a lying norm certificate: |z| at r = 0.8
        # exceeds 0.05 * log(9), so the report must carry the witness.
        f = SparseSeries(0.0, [1.0], [1])
        report = growth_bound_check(f, 0.1, [RadiusSpec.plain(0.8)], n_samples=1 << 8)
        assert not report.passed
        assert report.max_ratio > 1.0
        assert len(report.violations) == 1


class TestMomentAndExpBounds:
    def test_moment_validation(self):
        g = gap_block(3)
        with pytest.raises(ValueError):
            makarov_moment_check(g, 1.0, block_radius(3), 0)

    def test_moment_bound_holds_for_normalized_block(self):
        g = gap_block(100)
        g = g.scale((1.0 - 1e-9) / coeff_norm_upper(g))
        report = makarov_moment_check(g, 1.0, block_radius(100), 2, n_samples=1 << 14)
        assert report.passed
        assert report.lhs <= report.rhs
        assert report.margin == report.rhs - report.lhs

    def test_exp_preconditions(self):
        g = gap_block(3)
        with pytest.raises(ValueError):
            makarov_exp_check(g, 1.5, block_radius(3))
        with pytest.raises(ValueError):
            makarov_exp_check(g, 1.0, RadiusSpec.plain(0.5))

    def test_exp_mean_below_two(self):
        g = gap_block(100)
        g = g.scale((1.0 - 1e-9) / coeff_norm_upper(g))
        report = makarov_exp_check(g, 1.0, block_radius(100), n_samples=1 << 14)
        assert report.passed
        assert 1.0 <= report.lhs <= 2.0
        assert report.rhs == 2.0


class TestBoundaryDecay:
    def test_block_tail_decreases(self):
        radii = [RadiusSpec.plain(1 - 10.0**-k) for k in range(1, 9)]
        profile = little_bloch_profile(gap_block(4), radii, n_samples=1 << 12)
        assert profile.tail_decreasing
        assert len(profile.entries) == 8
        values = [v for _, v in profile.entries]
        assert max(values) > values[-1]

    def test_rising_window_is_flagged(self):
        # Sampled before its peak, a high-degree monomial still climbs.
        f = SparseSeries(0.0, [1.0], [100])
        radii = [RadiusSpec.plain(x) for x in (0.1, 0.2, 0.3, 0.4, 0.5)]
        profile = little_bloch_profile(f, radii, n_samples=1 << 8)
        assert not profile.tail_decreasing

    def test_radii_must_increase(self):
        radii = [RadiusSpec.plain(0.9), RadiusSpec.plain(0.5)]
        with pytest.raises(ValueError):
            little_bloch_profile(gap_block(2), radii)
