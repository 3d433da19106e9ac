# -*- coding: utf-8 -*-

import numpy as np
import pytest

from dualband_alloc.models import ScenarioConfig
from dualband_alloc.models.user_app import QoSClass
from dualband_alloc.services.constraint_audit import audit_groups, audit_trial
from dualband_alloc.services.simulation_service import run_trial


def audit(report, config):
    scenario = report.scenario
    return audit_trial(report, scenario.maps, scenario.demands, scenario.classes, config)


def first_muw_slot(report):
    return next(allocation for allocation in report.slots if allocation.muw_solutions)


class TestAuditPasses:

    def test_default_trial(self, config):
        report = run_trial(config, 1, 'gb-eod')
        assert audit(report, config) == []
        assert report.muw_power == 0.0

    @pytest.mark.parametrize('algorithm', ['gb-eod', 'random-group+eod', 'round-robin', 'random'])
    def test_both_bands_in_use(self, small_config, algorithm):
        report = run_trial(small_config, 2, algorithm)
        assert report.muw_power > 0.0
        assert report.mmw_power > 0.0
        assert audit(report, small_config) == []

    def test_several_qos_classes(self):
        config = ScenarioConfig(num_ues=5, mmw_quota=1, qos_horizons=(1, 3))
        report = run_trial(config, 9, 'gb-eod')
        assert audit(report, config) == []


class TestAuditDetects:

    def test_reported_power_mismatch(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        first_muw_slot(report).muw_power *= 1.5
        violations = audit(report, small_config)
        assert any('differs from the per-RB sum' in message for message in violations)

    def test_demand_shortfall(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        allocation = first_muw_slot(report)
        ua = sorted(allocation.muw_solutions)[0]
        allocation.muw_solutions[ua].per_rb_power[:] *= 0.5
        violations = audit(report, small_config)
        assert any(f"UA {ua} delivers" in message for message in violations)

    def test_ownership_mismatch(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        allocation = first_muw_slot(report)
        ua = sorted(allocation.muw_solutions)[0]
        rb = int(allocation.muw_solutions[ua].rbs[0])
        allocation.muw_ownership.rb_owner[rb] = ua + 1000
        violations = audit(report, small_config)
        assert any(f"uW RB {rb} powered by UA {ua}" in message for message in violations)

    def test_ua_on_both_bands(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        allocation = first_muw_slot(report)
        ua = sorted(allocation.muw_solutions)[0]
        allocation.mmw.solutions[ua] = allocation.muw_solutions[ua]
        object.__setattr__(allocation.mmw, 'selected', allocation.mmw.selected + (ua,))
        violations = audit(report, small_config)
        assert any('served on both bands' in message for message in violations)

    def test_mmw_under_selection(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        allocation = first_muw_slot(report)
        assert len(allocation.mmw.selected) == 2
        # the slot now serves one UA fewer than N' on mmW
        moved = allocation.mmw.selected[0]
        object.__setattr__(allocation.mmw, 'selected', allocation.mmw.selected[1:])
        allocation.mmw_power -= allocation.mmw.solutions.pop(moved).total_power
        violations = audit(report, small_config)
        assert any("1 mmW UAs, expected min(N', |group|) = 2" in message for message in violations)

    def test_mmw_over_selection(self, small_config):
        report = run_trial(small_config, 2, 'gb-eod')
        allocation = first_muw_slot(report)
        ua = sorted(allocation.muw_solutions)[0]
        allocation.mmw.solutions[ua] = allocation.muw_solutions.pop(ua)
        object.__setattr__(allocation.mmw, 'selected', allocation.mmw.selected + (ua,))
        violations = audit(report, small_config)
        assert any("3 mmW UAs, expected min(N', |group|) = 2" in message for message in violations)

    def test_groups_must_cover_class(self):
        qos_class = QoSClass(horizon=2, members=(0, 1, 2))
        assert audit_groups(((0,), (1, 2)), qos_class) == []
        violations = audit_groups(((0,), (1,)), qos_class)
        assert violations == ['T=2: groups do not cover the QoS class']
        assert 'more than one group' in audit_groups(((0, 1), (1, 2)), qos_class)[0]
        assert audit_groups(((0, 1, 2),), qos_class) == ['T=2: 1 groups']


@pytest.mark.slow
class TestReferenceScenario:

    def test_hundred_reference_trials(self, config):
        for seed in range(100):
            report = run_trial(config, seed, 'gb-eod')
            assert audit(report, config) == []
            assert np.isfinite(report.total_power)

    def test_hundred_trials_with_small_quota(self):
        config = ScenarioConfig(mmw_quota=5)
        for seed in range(100):
            report = run_trial(config, seed, 'gb-eod')
            assert audit(report, config) == []
