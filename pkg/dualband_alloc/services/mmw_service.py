# -*- coding: utf-8 -*-

import logging
from typing import Sequence

import numpy as np

from ..models.allocation import MmwSelection
from ..models.channel import EffectiveNoiseMap
from ..models.scenario_config import ScenarioConfig
from .power_model import min_power_waterfill, set_power

_logger = logging.getLogger(__name__)


def mmw_min_power(noise_row, bits: float, tx_time_s: float, cfg: ScenarioConfig) -> float:
    """Minimum mmW power of one UA granted every mmW RB for ``tx_time_s``"""
    return set_power(noise_row, bits, tx_time_s, cfg.mmw_rb_bandwidth_hz)


def select_greedy(group: Sequence[int], demands, mmw_map: EffectiveNoiseMap, slot: int,
                  cfg: ScenarioConfig, quota=None) -> MmwSelection:
    """Serve the ``min(N', |group|)`` cheapest UAs of the group over mmW.

    ``demands`` maps ua id to bits. Ties in power are broken by ua id. The
    UAs left out go to the uW allocator.
    """
    quota = cfg.mmw_quota if quota is None else quota
    effective = min(quota, len(group))
    tx_time = cfg.mmw_slot_time(effective)
    if effective == 0:
        return MmwSelection(slot=slot, selected=(), solutions={}, total_power=0.0, tx_time_s=tx_time)

    costs = {ua: mmw_min_power(mmw_map.row(ua, slot), demands[ua], tx_time, cfg) for ua in group}
    ranked = sorted(group, key=lambda ua: (costs[ua], ua))
    selected = tuple(ranked[:effective])

    solutions = {
        ua: min_power_waterfill(mmw_map.row(ua, slot), demands[ua], tx_time, cfg.mmw_rb_bandwidth_hz)
        for ua in selected
    }
    total = float(np.sum([solutions[ua].total_power for ua in selected]))
    _logger.debug(f"Slot {slot}: {effective} of {len(group)} UAs on mmW, tau'={tx_time:.3e}s, "
                  f"power={total:.4e} W")
    return MmwSelection(slot=slot, selected=selected, solutions=solutions, total_power=total,
                        tx_time_s=tx_time)
