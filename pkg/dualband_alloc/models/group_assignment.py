# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import Dict, Tuple


@dataclass(frozen=True)
class GroupAssignment:
    """Partition of a QoS class into ``horizon`` slot groups"""

    horizon: int
    groups: Tuple[Tuple[int, ...], ...]
    proxy_power: Dict[int, float]

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(group) for group in self.groups)

    @property
    def powers(self) -> Tuple[float, ...]:
        return tuple(float(sum(self.proxy_power[ua] for ua in group)) for group in self.groups)
