# -*- coding: utf-8 -*-
"""Independent re-check of the scheduling constraints on finished allocations.

Only stored powers, RB indices and the noise maps are read; rates are
recomputed here from omega log2(1 + p / N) so a bug in the allocators cannot
hide itself.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from ..models.allocation import SlotAllocation, TrialReport
from ..models.channel import MMW, MUW, EffectiveNoiseMap
from ..models.scenario_config import ScenarioConfig
from ..models.user_app import QoSClass

_logger = logging.getLogger(__name__)

DEMAND_RTOL = 1e-9
POWER_RTOL = 1e-9


def _delivered_bits(noise_row, rbs, powers, omega, duration):
    noise = np.asarray(noise_row, dtype=float)[np.asarray(rbs, dtype=int)]
    return duration * float(np.sum(omega * np.log2(1.0 + np.asarray(powers, dtype=float) / noise)))


def audit_slot(allocation: SlotAllocation, maps: Dict[str, EffectiveNoiseMap], demands: Dict[int, float],
               cfg: ScenarioConfig) -> List[str]:
    """Violations found in one slot allocation; an empty list means the slot is valid"""
    violations = []
    slot = allocation.slot
    prefix = f"slot {slot} (T={allocation.horizon})"
    mmw_uas = list(allocation.mmw.selected)
    muw_uas = sorted(allocation.muw_solutions)

    # band exclusivity and coverage of the group
    if set(mmw_uas) & set(muw_uas):
        violations.append(f"{prefix}: UAs {sorted(set(mmw_uas) & set(muw_uas))} served on both bands")
    if sorted(mmw_uas + muw_uas) != sorted(allocation.group):
        violations.append(f"{prefix}: served UAs do not match the group")

    # exactly N' mmW UAs, or the whole group when it is smaller
    expected = min(cfg.mmw_quota, len(allocation.group))
    if len(mmw_uas) != expected:
        violations.append(f"{prefix}: {len(mmw_uas)} mmW UAs, expected min(N', |group|) = {expected}")

    # uW RB exclusivity
    owners = {}
    for ua in muw_uas:
        solution = allocation.muw_solutions[ua]
        if len(solution.rbs) == 0:
            violations.append(f"{prefix}: uW UA {ua} owns no RB")
        for rb in np.asarray(solution.rbs, dtype=int):
            if rb in owners:
                violations.append(f"{prefix}: uW RB {rb} owned by UAs {owners[rb]} and {ua}")
            owners[rb] = ua
    if allocation.muw_ownership is not None:
        for rb, ua in owners.items():
            if allocation.muw_ownership.rb_owner[rb] != ua:
                violations.append(f"{prefix}: uW RB {rb} powered by UA {ua} but owned by "
                                  f"{allocation.muw_ownership.rb_owner[rb]}")

    band_checks = (
        (MUW, muw_uas, allocation.muw_solutions, cfg.muw_rb_bandwidth_hz, cfg.slot_duration_s),
        (MMW, mmw_uas, allocation.mmw.solutions, cfg.mmw_rb_bandwidth_hz, allocation.mmw.tx_time_s),
    )
    for band, uas, solutions, omega, duration in band_checks:
        band_total = 0.0
        for ua in uas:
            solution = solutions[ua]
            powers = np.asarray(solution.per_rb_power, dtype=float)
            if np.any(powers < 0) or not np.all(np.isfinite(powers)):
                violations.append(f"{prefix}: {band} UA {ua} has negative or non-finite power")
                continue
            delivered = _delivered_bits(maps[band].row(ua, slot), solution.rbs, powers, omega, duration)
            required = demands[ua]
            if delivered < required * (1.0 - DEMAND_RTOL):
                violations.append(f"{prefix}: {band} UA {ua} delivers {delivered:.6e} of {required:.6e} bits")
            band_total += float(powers.sum())
        reported = allocation.muw_power if band == MUW else allocation.mmw_power
        if not np.isclose(band_total, reported, rtol=POWER_RTOL, atol=0.0):
            violations.append(f"{prefix}: {band} power {reported:.6e} W differs from the per-RB sum "
                              f"{band_total:.6e} W")
    return violations


def audit_groups(groups: Sequence[Sequence[int]], qos_class: QoSClass) -> List[str]:
    """Groups of a class must be disjoint, cover it and number exactly T"""
    violations = []
    flat = [ua for group in groups for ua in group]
    if len(groups) != qos_class.horizon:
        violations.append(f"T={qos_class.horizon}: {len(groups)} groups")
    if len(flat) != len(set(flat)):
        violations.append(f"T={qos_class.horizon}: a UA appears in more than one group")
    if set(flat) != set(qos_class.members):
        violations.append(f"T={qos_class.horizon}: groups do not cover the QoS class")
    return violations


def audit_trial(report: TrialReport, maps: Dict[str, EffectiveNoiseMap], demands: Dict[int, float],
                classes: Sequence[QoSClass], cfg: ScenarioConfig) -> List[str]:
    """Every violation of a trial, groups first then slot by slot"""
    violations = []
    by_horizon = {assignment.horizon: assignment for assignment in report.groupings}
    for qos_class in classes:
        assignment = by_horizon.get(qos_class.horizon)
        if assignment is None:
            violations.append(f"T={qos_class.horizon}: no grouping reported")
            continue
        violations.extend(audit_groups(assignment.groups, qos_class))
    for allocation in report.slots:
        violations.extend(audit_slot(allocation, maps, demands, cfg))

    reported = report.total_power
    summed = float(sum(s.muw_power + s.mmw_power for s in report.slots))
    if not np.isclose(reported, summed, rtol=POWER_RTOL, atol=0.0):
        violations.append(f"trial total {reported:.6e} W differs from the slot sum {summed:.6e} W")
    if violations:
        _logger.warning(f"Trial seed {report.seed}: {len(violations)} constraint violations")
    return violations
