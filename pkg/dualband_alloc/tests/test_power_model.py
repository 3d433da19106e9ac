# -*- coding: utf-8 -*-

import numpy as np
import pytest

from dualband_alloc.exceptions import DomainError
from dualband_alloc.services.oracle_service import convex_min_power, subset_min_power
from dualband_alloc.services.power_model import (min_power_waterfill, power_from_rate, rate_from_power,
                                                 set_power, waterfill_summary)

from .conftest import log_uniform_noises

# reference demand, slot and RB width
BITS = 10e3
TAU = 10e-3
OMEGA = 180e3


class TestConversions:

    @pytest.mark.parametrize('noise, rate, omega, expected', [
        (1.0, 0.0, 1.0, 0.0),
        (1.0, 1.0, 1.0, 1.0),
        (1.0, 1e6, 180e3, 2 ** (1e6 / 180e3) - 1),
    ])
    def test_power_from_rate(self, noise, rate, omega, expected):
        assert power_from_rate(noise, rate, omega) == pytest.approx(expected, rel=1e-12)

    def test_power_from_rate_reference_value(self):
        assert power_from_rate(1.0, 1e6, 180e3) == pytest.approx(46.0, rel=1e-2)

    @pytest.mark.parametrize('noise, power, omega, expected', [
        (1.0, 0.0, 1.0, 0.0),
        (1.0, 3.0, 1.0, 2.0),
    ])
    def test_rate_from_power(self, noise, power, omega, expected):
        assert rate_from_power(noise, power, omega) == pytest.approx(expected, rel=1e-12)

    def test_round_trip(self):
        rate = 5.5556 * OMEGA
        power = power_from_rate(3e-9, rate, OMEGA)
        assert rate_from_power(3e-9, power, OMEGA) == pytest.approx(rate, rel=1e-12)

    def test_vectorised(self):
        powers = power_from_rate(np.array([1.0, 2.0]), np.array([1.0, 1.0]), 1.0)
        assert np.allclose(powers, [1.0, 2.0])

    def test_negative_inputs(self):
        with pytest.raises(DomainError):
            power_from_rate(1.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            rate_from_power(1.0, -1.0, 1.0)


class TestWaterfill:

    def test_zero_demand(self):
        solution = min_power_waterfill([1.0, 2.0], 0.0, 1.0, 1.0)
        assert solution.total_power == 0.0
        assert solution.active_count == 0
        assert np.all(solution.per_rb_rate == 0.0)

    def test_bad_rb_stays_inactive(self):
        solution = min_power_waterfill([1.0, 100.0], 1.0, 1.0, 1.0)
        assert list(solution.active_set) == [0]
        assert solution.total_power == pytest.approx(1.0)
        assert solution.per_rb_power[1] == 0.0

    def test_symmetric_rbs(self):
        solution = min_power_waterfill([1.0, 1.0, 1.0, 1.0], 4.0, 1.0, 1.0)
        assert solution.water_level == pytest.approx(2.0)
        assert np.allclose(solution.per_rb_power, 1.0)
        assert solution.total_power == pytest.approx(4.0)

    def test_rb_indices_are_carried(self):
        solution = min_power_waterfill([5.0, 1.0], 1.0, 1.0, 1.0, rbs=[7, 3])
        assert list(solution.rbs) == [7, 3]
        assert list(solution.active_set) == [3]

    def test_active_set_rule(self, rng):
        for _ in range(50):
            noises = log_uniform_noises(rng, 8)
            solution = min_power_waterfill(noises, BITS, TAU, OMEGA)
            active = solution.active_mask
            assert np.all(noises[active] < solution.water_level)
            assert np.all(noises[~active] >= solution.water_level)
            assert np.all(solution.per_rb_power >= 0)
            assert solution.total_power == pytest.approx(solution.per_rb_power.sum(), rel=1e-12)

    def test_demand_is_met_exactly(self, rng):
        for _ in range(50):
            noises = log_uniform_noises(rng, int(rng.integers(1, 20)))
            solution = min_power_waterfill(noises, BITS, TAU, OMEGA)
            assert TAU * solution.per_rb_rate.sum() == pytest.approx(BITS, rel=1e-9)
            recomputed = rate_from_power(noises, solution.per_rb_power, OMEGA)
            assert TAU * np.sum(recomputed) == pytest.approx(BITS, rel=1e-9)

    def test_homogeneity(self, rng):
        noises = log_uniform_noises(rng, 6)
        base = min_power_waterfill(noises, BITS, TAU, OMEGA)
        scaled = min_power_waterfill(7.5 * noises, BITS, TAU, OMEGA)
        assert scaled.total_power == pytest.approx(7.5 * base.total_power, rel=1e-12)
        assert np.array_equal(scaled.active_mask, base.active_mask)
        assert np.allclose(scaled.per_rb_rate, base.per_rb_rate, rtol=1e-9)

    def test_monotone_in_candidate_set(self, rng):
        for _ in range(50):
            noises = log_uniform_noises(rng, 6)
            full = set_power(noises, BITS, TAU, OMEGA)
            for drop in range(6):
                assert set_power(np.delete(noises, drop), BITS, TAU, OMEGA) >= full * (1 - 1e-12)

    def test_summary_matches_full_solution(self, rng):
        noises = log_uniform_noises(rng, 40)
        solution = min_power_waterfill(noises, BITS, TAU, OMEGA)
        total, level = waterfill_summary(noises, BITS, TAU, OMEGA)
        assert total == solution.total_power
        assert level == solution.water_level

    def test_large_band_does_not_overflow(self, rng):
        noises = log_uniform_noises(rng, 5555, low=1e-15)
        solution = min_power_waterfill(noises, BITS, 1e-4, OMEGA)
        assert np.isfinite(solution.total_power)
        assert 1e-4 * solution.per_rb_rate.sum() == pytest.approx(BITS, rel=1e-9)

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            min_power_waterfill([], 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            min_power_waterfill([1.0, 0.0], 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            min_power_waterfill([1.0], -1.0, 1.0, 1.0)

    def test_matches_subset_enumeration(self, rng):
        for _ in range(100):
            noises = log_uniform_noises(rng, int(rng.integers(1, 9)))
            expected = subset_min_power(noises, BITS, TAU, OMEGA)
            assert set_power(noises, BITS, TAU, OMEGA) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.slow
    def test_matches_subset_enumeration_thousand_instances(self):
        rng = np.random.default_rng(1000)
        for _ in range(1000):
            noises = log_uniform_noises(rng, int(rng.integers(1, 9)))
            expected = subset_min_power(noises, BITS, TAU, OMEGA)
            assert min_power_waterfill(noises, BITS, TAU, OMEGA).total_power == pytest.approx(expected, rel=1e-6)

    def test_matches_convex_solver(self, rng):
        for _ in range(10):
            noises = log_uniform_noises(rng, int(rng.integers(2, 7)), decades=2.0)
            expected = convex_min_power(noises, BITS, TAU, OMEGA)
            assert set_power(noises, BITS, TAU, OMEGA) == pytest.approx(expected, rel=1e-4)
