# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class UserApp:
    """One application stream running on a UE.

    All UAs of the same UE share its position (distance, angle).
    """

    ua_id: int
    ue_id: int
    distance_m: float
    angle_rad: float
    demand_bits: float
    qos_horizon: int


@dataclass(frozen=True)
class QoSClass:
    """UAs that tolerate at most ``horizon`` slots of delay"""

    horizon: int
    members: Tuple[int, ...]

    def __len__(self):
        return len(self.members)
