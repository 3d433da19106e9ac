# -*- coding: utf-8 -*-
"""Exhaustive references for small instances.

Nothing here reuses the allocators: the only shared code is the single-RB
rate/power conversion. Every enumeration is bounded by an OracleBudget and
fails loudly beyond it.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..exceptions import OracleBudgetError
from ..models.group_assignment import GroupAssignment
from .grouping_service import grouping_objective
from .power_model import power_from_rate

_logger = logging.getLogger(__name__)

ENUMERATION_ORDERS = ('forward', 'reverse')
_DEMAND_SLACK = 1e-12


@dataclass(frozen=True)
class OracleBudget:
    max_uas: int = 3
    max_rbs: int = 12
    max_partitions: int = 20000

    def check(self, uas: int, rbs: int, enumeration_size: int):
        if uas > self.max_uas:
            raise OracleBudgetError(f"{uas} UAs exceed the oracle budget of {self.max_uas}")
        if rbs > self.max_rbs:
            raise OracleBudgetError(f"{rbs} RBs exceed the oracle budget of {self.max_rbs}")
        if enumeration_size > self.max_partitions:
            raise OracleBudgetError(
                f"{enumeration_size} candidates exceed the oracle budget of {self.max_partitions}")


@dataclass(frozen=True)
class OwnershipOptimum:
    total_power: float
    rb_owner: Optional[Tuple[int, ...]]

    @property
    def feasible(self) -> bool:
        return self.rb_owner is not None


def subset_min_power(noises, bits: float, tau: float, omega: float) -> float:
    """Minimum power of carrying ``bits`` over ``noises`` by trying every active subset.

    For a subset A the equal-level split gives rate omega log2(G / N_r) on
    each r in A; the split is admissible when every rate is non-negative.
    """
    noises = np.asarray(noises, dtype=float)
    if bits == 0:
        return 0.0
    best = math.inf
    for size in range(1, noises.size + 1):
        for subset in itertools.combinations(range(noises.size), size):
            chosen = noises[list(subset)]
            log_level = np.log2(chosen).mean() + bits / (tau * omega * size)
            rates = omega * (log_level - np.log2(chosen))
            if np.any(rates < 0):
                continue
            best = min(best, float(np.sum(power_from_rate(chosen, rates, omega))))
    return best


def convex_min_power(noises, bits: float, tau: float, omega: float) -> float:
    """Minimum power from a generic SLSQP solve over per-RB rate shares"""
    noises = np.asarray(noises, dtype=float)
    if bits == 0:
        return 0.0
    rate = bits / tau
    # normalise so the best single RB costs 1
    scale = float(np.min(power_from_rate(noises, rate, omega)))

    def objective(shares):
        return float(np.sum(power_from_rate(noises, rate * np.clip(shares, 0.0, None), omega))) / scale

    def gradient(shares):
        exponent = rate * np.clip(shares, 0.0, None) / omega
        return noises * np.exp2(exponent) * math.log(2.0) * rate / omega / scale

    start = np.full(noises.size, 1.0 / noises.size)
    result = minimize(
        objective,
        start,
        jac=gradient,
        method='SLSQP',
        bounds=[(0.0, 1.0)] * noises.size,
        constraints=[{'type': 'eq', 'fun': lambda shares: np.sum(shares) - 1.0,
                      'jac': lambda shares: np.ones_like(shares)}],
        options={'maxiter': 500, 'ftol': 1e-14},
    )
    if not result.success:
        _logger.warning(f"SLSQP did not converge: {result.message}")
    return objective(result.x) * scale


def _set_values(noise_matrix, demands, tau, omega):
    """Memoized subset-enumeration value per (row, RB set)"""
    cache = {}

    def value(row, rbs):
        key = (row, rbs)
        if key not in cache:
            cache[key] = subset_min_power(noise_matrix[row, list(rbs)], demands[row], tau, omega)
        return cache[key]
    return value


def exact_muw_optimum(noise_matrix, demands, tau: float, omega: float,
                      budget: OracleBudget = OracleBudget(),
                      order: str = 'forward') -> OwnershipOptimum:
    """Minimum total uW power over every ownership map.

    Each RB goes to one UA or stays unowned; maps leaving a UA without RBs
    are discarded. ``order`` picks the enumeration direction over RBs. The
    returned ``rb_owner`` holds row indices, ``-1`` for unowned, or is
    ``None`` when no map is admissible.
    """
    if order not in ENUMERATION_ORDERS:
        raise ValueError(f"order must be one of {', '.join(ENUMERATION_ORDERS)}")
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    count, rb_count = noise_matrix.shape
    budget.check(count, rb_count, (count + 1) ** rb_count)
    value = _set_values(noise_matrix, np.asarray(demands, dtype=float), tau, omega)

    best_power = math.inf
    best_owner = None
    for labels in itertools.product(range(-1, count), repeat=rb_count):
        owner = labels if order == 'forward' else labels[::-1]
        sets = [tuple(k for k in range(rb_count) if owner[k] == row) for row in range(count)]
        if any(not rbs for rbs in sets):
            continue
        total = sum(value(row, rbs) for row, rbs in enumerate(sets))
        if total < best_power:
            best_power, best_owner = total, tuple(owner)
    return OwnershipOptimum(float(best_power), best_owner)


def exact_grouping(ua_ids: Sequence[int], proxies: Dict[int, float], horizon: int,
                   budget: OracleBudget = OracleBudget()) -> Tuple[float, Optional[GroupAssignment]]:
    """Lowest grouping objective over every partition into ``horizon`` labelled nonempty groups"""
    ua_ids = list(ua_ids)
    budget.check(0, 0, horizon ** len(ua_ids))
    best_value = math.inf
    best = None
    for labels in itertools.product(range(horizon), repeat=len(ua_ids)):
        if len(set(labels)) < horizon:
            continue
        groups = tuple(tuple(ua for ua, label in zip(ua_ids, labels) if label == t) for t in range(horizon))
        candidate = GroupAssignment(horizon, groups, {ua: float(proxies[ua]) for ua in ua_ids})
        objective = grouping_objective(candidate)
        if objective < best_value:
            best_value, best = objective, candidate
    return best_value, best


def exact_ilp_feasible(estimates, demands, tau: float, budget: OracleBudget = OracleBudget()) -> bool:
    """Whether some ownership pattern gives every UA tau * sum(R) >= b.

    Depth-first over RBs; an RB only goes to a UA that rates it positive or
    stays unowned, and a branch stops once some UA can no longer reach its
    demand with the RBs left.
    """
    estimates = np.asarray(estimates, dtype=float)
    targets = np.asarray(demands, dtype=float) * (1.0 - _DEMAND_SLACK)
    count, rb_count = estimates.shape
    budget.check(count, rb_count, 0)

    positive = np.where(estimates > 0, estimates, 0.0)
    # remaining[k] = capacity of RBs k.. per UA
    remaining = np.vstack([np.cumsum(positive[:, ::-1], axis=1)[:, ::-1].T, np.zeros(count)])

    def search(k, delivered):
        if np.all(tau * delivered >= targets):
            return True
        if k == rb_count or np.any(tau * (delivered + remaining[k]) < targets):
            return False
        for row in range(count):
            if positive[row, k] > 0 and tau * delivered[row] < targets[row]:
                grown = delivered.copy()
                grown[row] += positive[row, k]
                if search(k + 1, grown):
                    return True
        return search(k + 1, delivered)

    return search(0, np.zeros(count))
