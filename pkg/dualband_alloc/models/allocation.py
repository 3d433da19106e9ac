# -*- coding: utf-8 -*-

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

UNOWNED = -1


@dataclass(frozen=True)
class RbSetSolution:
    """Minimum-power rate split of one UA over a candidate RB set.

    Arrays are aligned with ``rbs``; RBs outside the active set carry zero
    power and zero rate.
    """

    rbs: np.ndarray
    active_mask: np.ndarray
    per_rb_power: np.ndarray
    per_rb_rate: np.ndarray
    total_power: float
    water_level: float

    @property
    def active_set(self) -> np.ndarray:
        return self.rbs[self.active_mask]

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active_mask))


@dataclass(frozen=True)
class MmwSelection:
    """UAs served over mmW in one slot, each granted every mmW RB"""

    slot: int
    selected: Tuple[int, ...]
    solutions: Dict[int, RbSetSolution]
    total_power: float
    tx_time_s: float


@dataclass(frozen=True)
class BetaState:
    """Per-UA log2(-beta) multiplier estimates and initial RB budgets"""

    ua_ids: Tuple[int, ...]
    log2_neg_beta: np.ndarray
    rb_budget: np.ndarray

    def escalated(self, step: float, only: Optional[Tuple[int, ...]] = None) -> 'BetaState':
        """Copy with ``step`` added to every UA, or to the UAs in ``only``"""
        increment = np.full(len(self.ua_ids), step)
        if only is not None:
            chosen = set(only)
            increment = np.array([step if ua in chosen else 0.0 for ua in self.ua_ids])
        return BetaState(self.ua_ids, self.log2_neg_beta + increment, self.rb_budget)


@dataclass
class OwnershipMap:
    """Owner of every uW RB, ``UNOWNED`` for the free pool"""

    ua_ids: Tuple[int, ...]
    rb_owner: np.ndarray

    @classmethod
    def empty(cls, ua_ids, rb_count: int) -> 'OwnershipMap':
        return cls(tuple(ua_ids), np.full(rb_count, UNOWNED, dtype=int))

    @property
    def rb_count(self) -> int:
        return len(self.rb_owner)

    def rbs_of(self, ua_id: int) -> np.ndarray:
        return np.flatnonzero(self.rb_owner == ua_id)

    def owned_count(self, ua_id: int) -> int:
        return int(np.count_nonzero(self.rb_owner == ua_id))

    def free_rbs(self) -> np.ndarray:
        return np.flatnonzero(self.rb_owner == UNOWNED)

    def copy(self) -> 'OwnershipMap':
        return OwnershipMap(self.ua_ids, self.rb_owner.copy())

    def transfer(self, rb: int, receiver: int):
        self.rb_owner[rb] = receiver


@dataclass(frozen=True)
class AssignmentResult:
    """Outcome of the greedy feasibility construction"""

    feasible: bool
    ownership: Optional[OwnershipMap]
    unsatisfied: Tuple[int, ...] = ()


@dataclass(frozen=True)
class TransferDeltas:
    """Net power reduction of moving each RB to each candidate receiver.

    ``net[k, j]`` is the reduction (positive means improvement) of giving RB
    ``k`` to ``receivers[j]``; ``-inf`` marks a forbidden move. ``best_gain``
    and ``best_receiver`` are the row-wise best of ``net``.
    """

    receivers: Tuple[int, ...]
    donor_change: np.ndarray
    receiver_change: np.ndarray
    net: np.ndarray
    best_gain: np.ndarray
    best_receiver: np.ndarray


@dataclass(frozen=True)
class TransferStep:
    iteration: int
    rb: int
    donor: int
    receiver: int
    total_power: float


@dataclass
class SlotAllocation:
    """Outcome of one slot of one QoS class over both bands"""

    slot: int
    horizon: int
    group: Tuple[int, ...]
    strategy: str
    mmw: MmwSelection
    muw_ownership: Optional[OwnershipMap]
    muw_solutions: Dict[int, RbSetSolution]
    muw_power: float
    mmw_power: float
    escalation_count: int = 0
    transfer_count: int = 0
    descent_trace: List[TransferStep] = field(default_factory=list)

    @property
    def total_power(self) -> float:
        return self.mmw_power + self.muw_power

    @property
    def muw_uas(self) -> Tuple[int, ...]:
        selected = set(self.mmw.selected)
        return tuple(ua for ua in self.group if ua not in selected)


@dataclass
class TrialScenario:
    """Random draw of a trial: topology, QoS classes and both noise maps"""

    uas: list
    classes: list
    maps: Dict[str, object]

    @property
    def demands(self) -> Dict[int, float]:
        return {ua.ua_id: ua.demand_bits for ua in self.uas}

    @property
    def distances(self) -> Dict[int, float]:
        return {ua.ua_id: ua.distance_m for ua in self.uas}


@dataclass
class TrialReport:
    seed: int
    algorithm: str
    slots: List[SlotAllocation]
    groupings: list
    grouping_objective: float
    runtime_ms: float = 0.0
    scenario: Optional[TrialScenario] = None

    @property
    def muw_power(self) -> float:
        return float(sum(slot.muw_power for slot in self.slots))

    @property
    def mmw_power(self) -> float:
        return float(sum(slot.mmw_power for slot in self.slots))

    @property
    def total_power(self) -> float:
        return self.muw_power + self.mmw_power

    @property
    def escalation_count(self) -> int:
        return sum(slot.escalation_count for slot in self.slots)

    @property
    def transfer_count(self) -> int:
        return sum(slot.transfer_count for slot in self.slots)
