"""Block modulus statistics: energy, limit law, and tail-constant fitting."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from blochlab.distribution import (
    DEFAULT_X_GRID,
    TAIL_CONSTANT_WINDOW,
    block_energy_check,
    block_modulus_samples,
    block_parseval_sum,
    circle_modulus_cdf,
    estimate_tail_constant,
    rayleigh_cdf,
    rayleigh_distance,
    rotation_offset,
    tail_bound_check,
)

C_GRID_VALUE = 2.310042112674786


class TestRotationOffset:
    def test_deterministic_and_in_range(self):
        a = rotation_offset(0, 100)
        assert a == rotation_offset(0, 100)
        assert 1 <= a < 1 << 53

    def test_streams_are_separated(self):
        assert rotation_offset(0, 100) != rotation_offset(0, 101)
        assert rotation_offset(0, 100) != rotation_offset(1, 100)
        assert rotation_offset(0, 1, 2) != rotation_offset(0, 2, 1)


class TestBlockEnergy:
    def test_frozen_two_term_sum(self):
        assert block_parseval_sum(1) == pytest.approx(0.61329045331041, rel=1e-12)

    def test_matches_high_precision(self):
        for s in (1, 4, 7):
            with oracles.with_dps(60):
                ref = float(oracles.mp_block_sum(s, "one_minus_pow3", 2 * s, power_mult=2))
            assert block_parseval_sum(s) == pytest.approx(ref, rel=1e-13)

    def test_bracket_fields(self):
        report = block_energy_check(10)
        assert report.passed
        assert report.ratio == report.parseval_sum / 10
        assert report.upper == pytest.approx(1.1)
        assert report.lower == pytest.approx(0.95 * math.exp(-2.0))

    @given(s=st.integers(1, 60))
    @settings(max_examples=30, deadline=None)
    def test_bracket_holds(self, s):
        assert block_energy_check(s).passed


class TestLimitLaw:
    def test_rayleigh_cdf_formula(self):
        xs = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
        got = rayleigh_cdf(xs)
        expected = [0.0, 0.0, 1 - math.exp(-0.125), 1 - math.exp(-0.5), 1 - math.exp(-2.0)]
        assert np.allclose(got, expected, rtol=1e-12)

    def test_empirical_cdf_basics(self):
        cdf = circle_modulus_cdf(20, n_samples=1 << 12)
        assert cdf.s == 20
        assert np.all(np.diff(cdf.values) >= 0)
        assert cdf.evaluate(-1.0) == 0.0
        assert cdf.evaluate(float(cdf.values[-1])) == 1.0
        grid = np.linspace(0.0, 3.0, 50)
        assert np.all(np.diff(cdf.evaluate(grid)) >= 0)

    def test_normalisation_gives_mean_square_two(self):
        # Scaling by the exact Parseval energy over 2 makes the sampled
        # second moment exactly 2 up to grid orthogonality error.
        cdf = circle_modulus_cdf(50, n_samples=1 << 14)
        assert float(np.mean(cdf.values**2)) == pytest.approx(2.0, rel=1e-9)

    def test_offset_seed_handling(self):
        assert circle_modulus_cdf(5, 1 << 8, offset_seed=None).offset_u == 0
        assert circle_modulus_cdf(5, 1 << 8, offset_seed=3).offset_u == rotation_offset(3, 5)
        with pytest.raises(ValueError):
            circle_modulus_cdf(0)

    def test_kolmogorov_distances_frozen(self):
        expected = {
            25: 0.006103176119894416,
            50: 0.005153368519010992,
            100: 0.0034635426423628157,
            200: 0.0018843063989711917,
        }
        got = {s: rayleigh_distance(s) for s in expected}
        for s, d in expected.items():
            assert got[s] == pytest.approx(d, rel=1e-9)
        values = [got[s] for s in (25, 50, 100, 200)]
        assert all(b <= a + 0.01 for a, b in zip(values, values[1:]))
        assert max(values) <= 0.05


class TestTailConstant:
    def test_window_frozen(self):
        assert TAIL_CONSTANT_WINDOW[0] == pytest.approx(2.1972245773362196, rel=1e-12)
        assert TAIL_CONSTANT_WINDOW[1] == pytest.approx(32.47083132777303, rel=1e-12)

    def test_frozen_estimate(self):
        est = estimate_tail_constant([100, 150, 200])
        assert est.value == pytest.approx(C_GRID_VALUE, rel=1e-9)
        assert set(est.per_s) == {100, 150, 200}
        assert est.value == max(rec["c"] for rec in est.per_s.values())
        lo, hi = TAIL_CONSTANT_WINDOW
        assert lo <= est.value <= hi
        for rec in est.per_s.values():
            for point in rec["points"]:
                assert set(point) == {"x", "tail", "sigma", "c"}
                assert 0.0 < point["tail"] < 1.0
        assert est.x_grid == DEFAULT_X_GRID

    def test_unresolvable_tail_is_an_error(self):
        # A two-term block never reaches the top of the default threshold
        # grid, so no constant in the sanity window can certify it.
        with pytest.raises(ValueError, match="sanity window"):
            estimate_tail_constant([1])
        with pytest.raises(ValueError):
            estimate_tail_constant([])


class TestTailBound:
    def test_block_condition_thresholds(self):
        # The thresholds and slacks the block table instantiates: for each
        # column the exceedance must beat exp(-c*x**2) - eps.
        for j in (1, 2, 3):
            x = math.sqrt(1.0 / (C_GRID_VALUE * 2.0 ** (j + 6)))
            eps = 2.0 ** -(j + 6)
            report = tail_bound_check(200, [x], eps, C_GRID_VALUE)
            assert report.passed
            assert report.points[0]["margin"] > 0.0

    def test_edge_thresholds(self):
        report = tail_bound_check(10, [0.0, 10.0], 1.0 / 256, 2.31)
        assert report.passed
        at_zero, at_ten = report.points
        assert at_zero["tail"] == 1.0
        assert at_zero["bound"] == pytest.approx(1.0 - 1.0 / 256)
        assert at_ten["bound"] < 0.0  # vacuous: right side already negative

    def test_validation(self):
        with pytest.raises(ValueError):
            tail_bound_check(10, [0.5], 0.01, 0.0)

    def test_samples_shape(self):
        y = block_modulus_samples(5, 1 << 8, offset_u=7)
        assert y.shape == (1 << 8,)
        assert np.all(y >= 0)
