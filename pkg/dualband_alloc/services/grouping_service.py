# -*- coding: utf-8 -*-

import logging
import math
from typing import Dict, Sequence

import numpy as np

from ..models.group_assignment import GroupAssignment
from ..models.scenario_config import ScenarioConfig
from ..models.user_app import UserApp
from .channel_service import path_loss_db
from .power_model import set_power

_logger = logging.getLogger(__name__)


def proxy_power(ua: UserApp, cfg: ScenarioConfig) -> float:
    """Deterministic uW minimum power of ``ua`` over all K1 RBs.

    Fading is fixed to |g|^2 = 1 and shadowing to 0 dB, so the metric only
    depends on distance.
    """
    loss_db = path_loss_db(cfg.muw_pathloss, ua.distance_m, 0.0)
    noise = cfg.muw_rb_bandwidth_hz * cfg.noise_density_w_hz * 10.0 ** (loss_db / 10.0)
    noises = np.full(cfg.muw_rb_count, noise)
    return set_power(noises, ua.demand_bits, cfg.slot_duration_s, cfg.muw_rb_bandwidth_hz)


def proxy_powers(uas: Sequence[UserApp], cfg: ScenarioConfig) -> Dict[int, float]:
    return {ua.ua_id: proxy_power(ua, cfg) for ua in uas}


def group_users(ua_ids: Sequence[int], proxies: Dict[int, float], horizon: int,
                count_weight: float = 1.0, power_weight: float = 1.0) -> GroupAssignment:
    """Partition a QoS class into ``horizon`` groups balanced in size and proxy power.

    UAs are visited by descending proxy (ties by ua id). The first
    ``horizon`` UAs seed one group each; every later UA joins the group with
    the largest improvement

        D(j) = eta (|n_j - C1| - |n_j + 1 - C1|) + gamma (|P_j - C2| - |P_j + p_i - C2|)

    where C1 = N / T and C2 = sum(p) / T. Ties go to the lowest group index.
    """
    if horizon < 1:
        raise ValueError('horizon must be at least 1')
    ordered = sorted(ua_ids, key=lambda ua: (-proxies[ua], ua))
    total = len(ordered)
    if total < horizon:
        _logger.warning(f"QoS class with T={horizon} has only {total} UAs; "
                        f"{horizon - total} groups stay empty")

    expected_count = total / horizon
    expected_power = sum(proxies[ua] for ua in ordered) / horizon

    members = [[] for _ in range(horizon)]
    counts = np.zeros(horizon)
    powers = np.zeros(horizon)
    for position, ua in enumerate(ordered):
        if position < horizon:
            chosen = position
        else:
            power = proxies[ua]
            count_gain = np.abs(counts - expected_count) - np.abs(counts + 1 - expected_count)
            power_gain = np.abs(powers - expected_power) - np.abs(powers + power - expected_power)
            scores = count_weight * count_gain + power_weight * power_gain
            chosen = int(np.argmax(scores))
        members[chosen].append(ua)
        counts[chosen] += 1
        powers[chosen] += proxies[ua]

    return GroupAssignment(
        horizon=horizon,
        groups=tuple(tuple(group) for group in members),
        proxy_power={ua: float(proxies[ua]) for ua in ordered},
    )


def grouping_objective(assignment: GroupAssignment) -> float:
    """Sum over consecutive groups of |1 - n_t/n_{t+1}| + |1 - P_t/P_{t+1}|.

    An empty or zero-power successor group makes the objective infinite.
    """
    counts = assignment.counts
    powers = assignment.powers
    value = 0.0
    for t in range(assignment.horizon - 1):
        if counts[t + 1] == 0 or powers[t + 1] == 0:
            return math.inf
        value += abs(1.0 - counts[t] / counts[t + 1]) + abs(1.0 - powers[t] / powers[t + 1])
    return value


def is_partition(assignment: GroupAssignment, ua_ids: Sequence[int]) -> bool:
    """Groups are pairwise disjoint and cover exactly ``ua_ids``"""
    flat = [ua for group in assignment.groups for ua in group]
    return len(flat) == len(set(flat)) and set(flat) == set(ua_ids) and len(flat) == len(ua_ids)
