# -*- coding: utf-8 -*-

import itertools

import numpy as np
import pytest

from dualband_alloc.models import MMW, EffectiveNoiseMap, ScenarioConfig
from dualband_alloc.services.mmw_service import mmw_min_power, select_greedy
from dualband_alloc.services.power_model import rate_from_power


@pytest.fixture
def narrow_config():
    """Eight mmW RBs keep the maps small"""
    return ScenarioConfig(mmw_bandwidth_hz=8 * 180e3)


def mmw_map(values):
    values = np.asarray(values, dtype=float)
    return EffectiveNoiseMap(band=MMW, values=values[:, :, None], ua_ids=tuple(range(values.shape[0])))


class TestMinPower:

    def test_zero_demand(self, narrow_config):
        assert mmw_min_power(np.ones(8), 0.0, 1e-4, narrow_config) == 0.0

    def test_identical_noises(self, narrow_config):
        noise = 2e-12
        bits, tx_time, omega = 10e3, 1e-4, 180e3
        expected = 8 * noise * (2 ** (bits / (tx_time * omega * 8)) - 1)
        assert mmw_min_power(np.full(8, noise), bits, tx_time, narrow_config) == pytest.approx(expected, rel=1e-12)

    def test_halving_noise_halves_power(self, narrow_config, rng):
        noises = rng.uniform(1e-12, 1e-10, 8)
        full = mmw_min_power(noises, 10e3, 1e-4, narrow_config)
        assert mmw_min_power(noises / 2, 10e3, 1e-4, narrow_config) == pytest.approx(full / 2, rel=1e-12)


class TestSelectGreedy:

    def test_cheapest_are_selected(self, narrow_config):
        # row scale sets each UA's power
        noise = mmw_map(np.outer([3.0, 1.0, 2.0], np.ones(8)) * 1e-12)
        selection = select_greedy([0, 1, 2], {0: 10e3, 1: 10e3, 2: 10e3}, noise, 0, narrow_config, quota=2)
        assert selection.selected == (1, 2)
        assert set(selection.solutions) == {1, 2}

    def test_quota_above_group_size(self, narrow_config):
        noise = mmw_map(np.ones((3, 8)) * 1e-12)
        selection = select_greedy([0, 1, 2], {ua: 10e3 for ua in range(3)}, noise, 0, narrow_config, quota=5)
        assert sorted(selection.selected) == [0, 1, 2]

    def test_zero_quota(self, narrow_config):
        noise = mmw_map(np.ones((2, 8)) * 1e-12)
        selection = select_greedy([0, 1], {0: 10e3, 1: 10e3}, noise, 0, narrow_config, quota=0)
        assert selection.selected == ()
        assert selection.total_power == 0.0

    def test_ties_break_by_ua_id(self, narrow_config):
        noise = mmw_map(np.ones((4, 8)) * 1e-12)
        selection = select_greedy([3, 1, 2, 0], {ua: 10e3 for ua in range(4)}, noise, 0, narrow_config, quota=2)
        assert selection.selected == (0, 1)

    def test_demand_met_over_tx_time(self, narrow_config, rng):
        values = rng.uniform(1e-13, 1e-10, (4, 8))
        noise = mmw_map(values)
        selection = select_greedy([0, 1, 2, 3], {ua: 10e3 for ua in range(4)}, noise, 0, narrow_config, quota=3)
        for ua in selection.selected:
            solution = selection.solutions[ua]
            delivered = selection.tx_time_s * np.sum(rate_from_power(values[ua], solution.per_rb_power, 180e3))
            assert delivered == pytest.approx(10e3, rel=1e-9)
        assert selection.total_power == pytest.approx(
            sum(selection.solutions[ua].total_power for ua in selection.selected))

    def test_greedy_is_optimal_subset(self, narrow_config, rng):
        values = rng.uniform(1e-13, 1e-10, (6, 8)) * rng.uniform(1, 100, (6, 1))
        noise = mmw_map(values)
        demands = {ua: 10e3 for ua in range(6)}
        selection = select_greedy(list(range(6)), demands, noise, 0, narrow_config, quota=3)
        tx_time = narrow_config.mmw_slot_time(3)
        best = min(
            sum(mmw_min_power(values[ua], 10e3, tx_time, narrow_config) for ua in subset)
            for subset in itertools.combinations(range(6), 3)
        )
        assert selection.total_power == pytest.approx(best, rel=1e-12)

    def test_tdma_share_uses_slot_remainder(self, rng):
        config = ScenarioConfig(mmw_bandwidth_hz=8 * 180e3, mmw_time_mode='tdma_share', mmw_quota=4)
        noise = mmw_map(rng.uniform(1e-13, 1e-10, (6, 8)))
        selection = select_greedy(list(range(6)), {ua: 10e3 for ua in range(6)}, noise, 0, config)
        assert len(selection.selected) == 4
        assert selection.tx_time_s == pytest.approx((10e-3 - 4 * 0.1e-3) / 4)
