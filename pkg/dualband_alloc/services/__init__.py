# -*- coding: utf-8 -*-

from . import power_model
from . import scenario_service
from . import channel_service
from . import grouping_service
from . import mmw_service
from . import baseline_service
from . import muw_service
from . import oracle_service
from . import constraint_audit
from .simulation_service import ALGORITHMS, SWEEP_VARIABLES, SimulationService, run_trial
