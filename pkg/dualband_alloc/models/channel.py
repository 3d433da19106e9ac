# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..exceptions import DomainError

MUW = 'muw'
MMW = 'mmw'
BANDS = (MUW, MMW)


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss: alpha + 10 * beta * log10(d) + shadow"""

    alpha_db: float
    beta: float
    shadow_sigma_db: float

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError('beta must be positive')
        if self.shadow_sigma_db < 0:
            raise DomainError('shadow_sigma_db must be non-negative')


@dataclass(frozen=True)
class EffectiveNoiseMap:
    """Normalised noise N_nkt of one band, indexed (ua_id, rb, slot) in Watts.

    Row ``i`` belongs to ``ua_ids[i]``; the generator uses ua ids 0..N-1 so
    rows and ids coincide for a whole trial.
    """

    band: str
    values: np.ndarray
    ua_ids: Tuple[int, ...]

    def __post_init__(self):
        if self.band not in BANDS:
            raise ValueError(f"Unknown band '{self.band}'")
        if self.values.ndim != 3 or self.values.shape[0] != len(self.ua_ids):
            raise ValueError('values must be shaped (ua, rb, slot)')
        if not np.all(np.isfinite(self.values)) or not np.all(self.values > 0):
            raise ValueError('noise entries must be positive and finite')
        self.values.setflags(write=False)

    @property
    def rb_count(self) -> int:
        return self.values.shape[1]

    @property
    def slot_count(self) -> int:
        return self.values.shape[2]

    def row_index(self, ua_id: int) -> int:
        return self.ua_ids.index(ua_id)

    def row(self, ua_id: int, slot: int) -> np.ndarray:
        """Noise over all RBs of the band for one UA in one slot"""
        return self.values[self.row_index(ua_id), :, slot]

    def slot_matrix(self, ua_ids, slot: int) -> np.ndarray:
        """(len(ua_ids), rb) noise matrix of ``slot`` in the order given"""
        rows = [self.row_index(ua) for ua in ua_ids]
        return self.values[rows, :, slot]
