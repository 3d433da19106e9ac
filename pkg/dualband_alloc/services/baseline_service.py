# -*- coding: utf-8 -*-
"""Reference strategies the EOD allocator and GB grouping are compared against."""

import logging
from typing import Dict, Sequence

import numpy as np

from ..models.allocation import OwnershipMap
from ..models.group_assignment import GroupAssignment

_logger = logging.getLogger(__name__)


def round_robin_ownership(ua_ids: Sequence[int], rb_count: int) -> OwnershipMap:
    """RB k goes to the (k mod n)-th UA in ua id order"""
    ordered = sorted(ua_ids)
    ownership = OwnershipMap.empty(ordered, rb_count)
    if ordered:
        ownership.rb_owner[:] = np.asarray(ordered)[np.arange(rb_count) % len(ordered)]
    return ownership


def random_ownership(ua_ids: Sequence[int], rb_count: int, rng: np.random.Generator) -> OwnershipMap:
    """RBs shuffled then dealt cyclically, so every UA owns at least one when n <= K"""
    ordered = sorted(ua_ids)
    ownership = OwnershipMap.empty(ordered, rb_count)
    if ordered:
        shuffled = rng.permutation(rb_count)
        ownership.rb_owner[shuffled] = np.asarray(ordered)[np.arange(rb_count) % len(ordered)]
    return ownership


def random_grouping(ua_ids: Sequence[int], proxies: Dict[int, float], horizon: int,
                    rng: np.random.Generator) -> GroupAssignment:
    """Random partition into ``horizon`` groups.

    The first ``horizon`` UAs of a random permutation seed one group each;
    every other UA picks a group uniformly.
    """
    if horizon < 1:
        raise ValueError('horizon must be at least 1')
    shuffled = [ua_ids[i] for i in rng.permutation(len(ua_ids))]
    members = [[] for _ in range(horizon)]
    for position, ua in enumerate(shuffled):
        label = position if position < horizon else int(rng.integers(horizon))
        members[label].append(ua)
    return GroupAssignment(
        horizon=horizon,
        groups=tuple(tuple(sorted(group)) for group in members),
        proxy_power={ua: float(proxies[ua]) for ua in ua_ids},
    )
