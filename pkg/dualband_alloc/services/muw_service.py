# -*- coding: utf-8 -*-
"""uW resource-block ownership and power allocation for one slot.

The allocator runs in four stages:

1. KKT rate estimates. With a multiplier ``beta_n < 0`` per UA, the optimal
   rate of UA ``n`` on RB ``k`` is bounded below by
   ``omega log2(-beta_n tau omega / (N_nk ln2))``. ``log2(-beta_n)`` starts
   from the value that spreads the demand evenly over ``m_n`` RBs around the
   mean log-noise of the row; a tighter start would need the unknown active
   set, so only this approximation is used.
2. Feasibility. A greedy hardest-first construction looks for an ownership
   map where every UA's estimated rates carry its demand; while it fails the
   multipliers are escalated by a fixed step.
3. Settling. Every UA water-fills its demand over the RBs it owns.
4. Descent. Single-RB ownership transfers are applied, best first, while one
   of them lowers the total power.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DomainError, EscalationLimitError
from ..models.allocation import (UNOWNED, AssignmentResult, BetaState, OwnershipMap, RbSetSolution,
                                 SlotAllocation, TransferDeltas, TransferStep)
from ..models.channel import MMW, MUW, EffectiveNoiseMap
from ..models.scenario_config import ScenarioConfig
from .baseline_service import random_ownership, round_robin_ownership
from .mmw_service import select_greedy
from .power_model import LN2, min_power_waterfill, waterfill_summary

_logger = logging.getLogger(__name__)

STRATEGIES = ('eod', 'round-robin', 'random')

# relative slack on the demand check of the construction
DEMAND_TOLERANCE = 1e-12
# a transfer must save more than this share of the current total
IMPROVEMENT_TOLERANCE = 1e-12


# ----------------------------------------------------------------------
# Rate estimation
# ----------------------------------------------------------------------

def initial_rb_budget(distances, rb_count: int) -> np.ndarray:
    """Initial RB counts proportional to distance, each >= 1, summing to ``rb_count``.

    Floors of the proportional quotas are raised to 1, then the remaining RBs
    go to the largest remainders (ties to the lowest index). If the floor of
    1 overshoots, the largest budgets above 1 give one RB back each.
    """
    distances = np.asarray(distances, dtype=float)
    count = distances.size
    if count == 0:
        return np.zeros(0, dtype=int)
    if count > rb_count:
        raise EscalationLimitError(f"{count} uW UAs cannot each own one of {rb_count} RBs")
    quotas = rb_count * distances / distances.sum()
    budget = np.maximum(np.floor(quotas).astype(int), 1)
    remainders = quotas - np.floor(quotas)

    deficit = rb_count - int(budget.sum())
    if deficit > 0:
        order = np.argsort(-remainders, kind='stable')
        budget[order[:deficit]] += 1
    while deficit < 0:
        reducible = np.flatnonzero(budget > 1)
        largest = reducible[np.argmax(budget[reducible])]
        budget[largest] -= 1
        deficit += 1
    return budget


def beta_init(noise_row, bits: float, rb_budget: int, cfg: ScenarioConfig) -> float:
    """Initial log2(-beta) of one UA.

    b / (tau m omega) - mean_k log2(tau omega / (N_k ln2))
    """
    if rb_budget < 1:
        raise DomainError(f"RB budget must be at least 1, got {rb_budget}")
    noise_row = np.asarray(noise_row, dtype=float)
    if np.any(noise_row <= 0):
        raise DomainError('Effective noise must be positive')
    tau = cfg.slot_duration_s
    omega = cfg.muw_rb_bandwidth_hz
    offsets = np.log2(tau * omega / (noise_row * LN2))
    return float(bits / (tau * rb_budget * omega) - offsets.mean())


def init_beta_state(ua_ids: Sequence[int], noise_matrix, demands, distances,
                    cfg: ScenarioConfig) -> BetaState:
    """BetaState of the uW UAs of a slot; rows of ``noise_matrix`` follow ``ua_ids``"""
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    budget = initial_rb_budget(distances, noise_matrix.shape[1])
    values = np.array([
        beta_init(noise_matrix[row], demands[row], budget[row], cfg) for row in range(len(ua_ids))
    ])
    return BetaState(tuple(ua_ids), values, budget)


def estimate_rates(beta: BetaState, noise_matrix, cfg: ScenarioConfig) -> np.ndarray:
    """Estimated rate of every (UA, RB), clipped at 0; positive entries are candidates"""
    tau = cfg.slot_duration_s
    omega = cfg.muw_rb_bandwidth_hz
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    offsets = np.log2(tau * omega / (noise_matrix * LN2))
    return np.maximum(0.0, omega * (beta.log2_neg_beta[:, None] + offsets))


def escalate(beta: BetaState, step: float, only: Optional[Sequence[int]] = None) -> BetaState:
    return beta.escalated(step, None if only is None else tuple(only))


# ----------------------------------------------------------------------
# Feasibility
# ----------------------------------------------------------------------

def construct_assignment(ua_ids: Sequence[int], estimates, demands, cfg: ScenarioConfig) -> AssignmentResult:
    """Greedy hardest-first ownership construction.

    UAs are visited by descending ``b / mean candidate rate`` (ties by ua id),
    a UA without candidates being the hardest. Each UA claims its free
    candidates by descending estimated rate until tau * sum >= b, and at least
    one RB. A UA that cannot be satisfied releases its claims and is reported
    in ``unsatisfied``.
    """
    estimates = np.asarray(estimates, dtype=float)
    demands = np.asarray(demands, dtype=float)
    count, rb_count = estimates.shape
    tau = cfg.slot_duration_s

    difficulty = np.empty(count)
    for row in range(count):
        candidates = estimates[row][estimates[row] > 0]
        if candidates.size == 0:
            difficulty[row] = math.inf
        else:
            difficulty[row] = demands[row] / candidates.mean()
    order = sorted(range(count), key=lambda row: (-difficulty[row], ua_ids[row]))

    ownership = OwnershipMap.empty(ua_ids, rb_count)
    unsatisfied = []
    for row in order:
        ua = ua_ids[row]
        free = np.flatnonzero((estimates[row] > 0) & (ownership.rb_owner == UNOWNED))
        if free.size == 0:
            unsatisfied.append(ua)
            continue
        ranked = free[np.argsort(-estimates[row, free], kind='stable')]
        delivered = tau * np.cumsum(estimates[row, ranked])
        target = demands[row] * (1.0 - DEMAND_TOLERANCE)
        reached = np.flatnonzero(delivered >= target)
        if reached.size == 0:
            unsatisfied.append(ua)
            continue
        ownership.rb_owner[ranked[:reached[0] + 1]] = ua

    unsatisfied = tuple(sorted(unsatisfied))
    if unsatisfied:
        return AssignmentResult(feasible=False, ownership=None, unsatisfied=unsatisfied)
    return AssignmentResult(feasible=True, ownership=ownership)


def find_feasible_assignment(beta: BetaState, noise_matrix, demands,
                             cfg: ScenarioConfig) -> Tuple[AssignmentResult, BetaState, int]:
    """Escalate ``beta`` until the construction succeeds.

    Returns the feasible result, the final multipliers and the number of
    escalations. In ``per_ua`` mode only the unsatisfied UAs are escalated.
    """
    rb_count = np.asarray(noise_matrix).shape[1]
    if len(beta.ua_ids) > rb_count:
        raise EscalationLimitError(
            f"{len(beta.ua_ids)} uW UAs cannot each own one of {rb_count} RBs")

    for escalations in range(cfg.escalation_cap + 1):
        estimates = estimate_rates(beta, noise_matrix, cfg)
        result = construct_assignment(beta.ua_ids, estimates, demands, cfg)
        if result.feasible:
            if escalations:
                _logger.debug(f"Feasible ownership after {escalations} escalations")
            return result, beta, escalations
        only = result.unsatisfied if cfg.escalation_mode == 'per_ua' else None
        beta = escalate(beta, cfg.escalation_step, only)

    raise EscalationLimitError(
        f"No feasible uW ownership after {cfg.escalation_cap} escalations "
        f"({len(beta.ua_ids)} UAs, {rb_count} RBs)")


# ----------------------------------------------------------------------
# Power settling and descent
# ----------------------------------------------------------------------

def settle_power(ownership: OwnershipMap, noise_matrix, demands,
                 cfg: ScenarioConfig) -> Dict[int, RbSetSolution]:
    """Water-fill every UA's demand over the RBs it owns"""
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    solutions = {}
    for row, ua in enumerate(ownership.ua_ids):
        rbs = ownership.rbs_of(ua)
        if rbs.size == 0:
            raise DomainError(f"UA {ua} owns no uW RB")
        solutions[ua] = min_power_waterfill(noise_matrix[row, rbs], demands[row], cfg.slot_duration_s,
                                            cfg.muw_rb_bandwidth_hz, rbs=rbs)
    return solutions


class SetValueCache:
    """Memoized minimum power V(ua, rb set) and water level of each evaluated set"""

    def __init__(self, noise_matrix, demands, cfg: ScenarioConfig):
        self.noise_matrix = np.asarray(noise_matrix, dtype=float)
        self.demands = np.asarray(demands, dtype=float)
        self.tau = cfg.slot_duration_s
        self.omega = cfg.muw_rb_bandwidth_hz
        self._values = {}

    def summary(self, row: int, rbs: Tuple[int, ...]) -> Tuple[float, float]:
        key = (row, rbs)
        cached = self._values.get(key)
        if cached is None:
            if not rbs:
                cached = (0.0, 0.0) if self.demands[row] == 0 else (math.inf, math.inf)
            else:
                cached = waterfill_summary(self.noise_matrix[row, list(rbs)], self.demands[row],
                                           self.tau, self.omega)
            self._values[key] = cached
        return cached

    def value(self, row: int, rbs: Tuple[int, ...]) -> float:
        return self.summary(row, rbs)[0]

    def __len__(self):
        return len(self._values)


def _owned_sets(ownership: OwnershipMap) -> List[Tuple[int, ...]]:
    return [tuple(int(k) for k in ownership.rbs_of(ua)) for ua in ownership.ua_ids]


def total_power(ownership: OwnershipMap, cache: SetValueCache) -> float:
    return float(sum(cache.value(row, rbs) for row, rbs in enumerate(_owned_sets(ownership))))


def transfer_deltas(ownership: OwnershipMap, noise_matrix, demands, cfg: ScenarioConfig,
                    cache: Optional[SetValueCache] = None) -> TransferDeltas:
    """Net power change of moving each RB to each other uW UA.

    Donor change is V(I) - V(I minus k), receiver change V(J) - V(J plus k),
    and 0 for a receiver whose water level does not exceed the RB's noise.
    Free RBs have a donor change of 0. Donors owning a single RB cannot give
    it away; those rows are ``-inf``.
    """
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    cache = cache or SetValueCache(noise_matrix, demands, cfg)
    ua_ids = ownership.ua_ids
    count = len(ua_ids)
    rb_count = ownership.rb_count
    row_of = {ua: row for row, ua in enumerate(ua_ids)}
    sets = _owned_sets(ownership)
    summaries = [cache.summary(row, rbs) for row, rbs in enumerate(sets)]

    donor_change = np.full(rb_count, -math.inf)
    receiver_change = np.full((rb_count, count), -math.inf)
    for k in range(rb_count):
        owner = ownership.rb_owner[k]
        donor_row = row_of.get(owner)
        if donor_row is None:
            donor_change[k] = 0.0
        elif len(sets[donor_row]) >= 2:
            remaining = tuple(r for r in sets[donor_row] if r != k)
            donor_change[k] = summaries[donor_row][0] - cache.value(donor_row, remaining)
        else:
            continue

        for row in range(count):
            if row == donor_row:
                continue
            before, level = summaries[row]
            if sets[row] and noise_matrix[row, k] >= level:
                receiver_change[k, row] = 0.0
            else:
                enlarged = tuple(sorted(sets[row] + (k,)))
                receiver_change[k, row] = before - cache.value(row, enlarged)

    with np.errstate(invalid='ignore'):
        net = donor_change[:, None] + receiver_change
    net[~np.isfinite(net)] = -math.inf
    if count:
        best_receiver = np.argmax(net, axis=1)
        best_gain = net[np.arange(rb_count), best_receiver]
        best_receiver = np.where(np.isfinite(best_gain), np.asarray(ua_ids)[best_receiver], UNOWNED)
    else:
        best_gain = np.full(rb_count, -math.inf)
        best_receiver = np.full(rb_count, UNOWNED)
    return TransferDeltas(
        receivers=tuple(ua_ids),
        donor_change=donor_change,
        receiver_change=receiver_change,
        net=net,
        best_gain=best_gain,
        best_receiver=best_receiver,
    )


@dataclass
class LocalSearchResult:
    ownership: OwnershipMap
    solutions: Dict[int, RbSetSolution]
    total_power: float
    initial_power: float
    trace: List[TransferStep] = field(default_factory=list)

    @property
    def transfer_count(self) -> int:
        return len(self.trace)


def local_search(ownership: OwnershipMap, noise_matrix, demands, cfg: ScenarioConfig) -> LocalSearchResult:
    """Apply the globally best single-RB transfer while it saves power.

    The best transfer is the largest net reduction, ties going to the lowest
    RB and then the lowest receiver ua id. The loop stops once no transfer
    saves more than a 1e-12 share of the current total, or after
    ``cfg.transfer_cap`` transfers.
    """
    if any(ownership.owned_count(ua) == 0 for ua in ownership.ua_ids):
        raise DomainError('Every uW UA must own at least one RB before the descent')
    noise_matrix = np.asarray(noise_matrix, dtype=float)
    ua_ids = ownership.ua_ids
    # receivers ordered by ua id so argmax ties resolve to the lowest id
    order = np.argsort(ua_ids, kind='stable')
    current = OwnershipMap(tuple(ua_ids[i] for i in order), ownership.rb_owner.copy())
    noise_sorted = noise_matrix[order]
    demands_sorted = np.asarray(demands, dtype=float)[order]
    cache = SetValueCache(noise_sorted, demands_sorted, cfg)

    total = total_power(current, cache)
    initial = total
    trace = []
    for iteration in range(1, cfg.transfer_cap + 1):
        deltas = transfer_deltas(current, noise_sorted, demands_sorted, cfg, cache)
        rb = int(np.argmax(deltas.best_gain))
        gain = deltas.best_gain[rb]
        if not np.isfinite(gain) or gain <= IMPROVEMENT_TOLERANCE * total:
            break
        donor = int(current.rb_owner[rb])
        receiver = int(deltas.best_receiver[rb])
        current.transfer(rb, receiver)
        total = total_power(current, cache)
        trace.append(TransferStep(iteration, rb, donor, receiver, total))
    else:
        _logger.warning(f"Local search stopped at the transfer cap ({cfg.transfer_cap}) "
                        f"with total power {total:.6e} W")

    final = OwnershipMap(tuple(ua_ids), current.rb_owner)
    solutions = settle_power(final, noise_matrix, demands, cfg)
    settled_total = float(sum(solution.total_power for solution in solutions.values()))
    _logger.debug(f"Local search: {len(trace)} transfers, {initial:.6e} W -> {settled_total:.6e} W, "
                  f"{len(cache)} set evaluations")
    return LocalSearchResult(final, solutions, settled_total, initial, trace)


# ----------------------------------------------------------------------
# Slot composition
# ----------------------------------------------------------------------

def allocate_slot(group: Sequence[int], demands: Dict[int, float], distances: Dict[int, float],
                  maps: Dict[str, EffectiveNoiseMap], slot: int, horizon: int, cfg: ScenarioConfig,
                  strategy: str = 'eod', rng: Optional[np.random.Generator] = None) -> SlotAllocation:
    """Allocate both bands of one slot to a group.

    mmW takes the cheapest UAs of the group; the rest share the uW RBs
    according to ``strategy``: ``eod`` (estimation, escalation and descent),
    ``round-robin`` or ``random`` ownership followed by water-filling.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"Unknown uW strategy '{strategy}'")
    group = tuple(group)
    mmw = select_greedy(group, demands, maps[MMW], slot, cfg)
    selected = set(mmw.selected)
    muw_uas = tuple(sorted(ua for ua in group if ua not in selected))

    allocation = SlotAllocation(slot=slot, horizon=horizon, group=group, strategy=strategy, mmw=mmw,
                                muw_ownership=None, muw_solutions={}, muw_power=0.0,
                                mmw_power=mmw.total_power)
    if not muw_uas:
        return allocation

    rb_count = maps[MUW].rb_count
    if len(muw_uas) > rb_count:
        raise EscalationLimitError(f"Slot {slot}: {len(muw_uas)} uW UAs cannot each own one of "
                                   f"{rb_count} RBs")
    noise = maps[MUW].slot_matrix(muw_uas, slot)
    bits = np.array([demands[ua] for ua in muw_uas], dtype=float)

    if strategy == 'eod':
        beta = init_beta_state(muw_uas, noise, bits, [distances[ua] for ua in muw_uas], cfg)
        result, _, escalations = find_feasible_assignment(beta, noise, bits, cfg)
        search = local_search(result.ownership, noise, bits, cfg)
        allocation.muw_ownership = search.ownership
        allocation.muw_solutions = search.solutions
        allocation.muw_power = search.total_power
        allocation.escalation_count = escalations
        allocation.transfer_count = search.transfer_count
        allocation.descent_trace = search.trace
    else:
        if strategy == 'round-robin':
            ownership = round_robin_ownership(muw_uas, rb_count)
        else:
            if rng is None:
                raise DomainError('The random strategy needs a generator')
            ownership = random_ownership(muw_uas, rb_count, rng)
        solutions = settle_power(ownership, noise, bits, cfg)
        allocation.muw_ownership = ownership
        allocation.muw_solutions = solutions
        allocation.muw_power = float(sum(s.total_power for s in solutions.values()))

    _logger.debug(f"Slot {slot} ({strategy}): {len(selected)} mmW / {len(muw_uas)} uW UAs, "
                  f"power {allocation.total_power:.6e} W")
    return allocation
