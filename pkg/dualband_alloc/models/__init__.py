# -*- coding: utf-8 -*-

from .channel import BANDS, MMW, MUW, EffectiveNoiseMap, PathLossParams
from .scenario_config import ScenarioConfig
from .user_app import QoSClass, UserApp
from .group_assignment import GroupAssignment
from .allocation import (
    UNOWNED,
    AssignmentResult,
    BetaState,
    MmwSelection,
    OwnershipMap,
    RbSetSolution,
    SlotAllocation,
    TransferDeltas,
    TransferStep,
    TrialReport,
    TrialScenario,
)
from .run_log import RunLog, RunLogEntry
