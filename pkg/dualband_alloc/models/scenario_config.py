# -*- coding: utf-8 -*-

import dataclasses
import logging
import math
import numbers
from dataclasses import dataclass
from typing import Optional, Tuple

from ..exceptions import ValidationError
from .channel import PathLossParams

_logger = logging.getLogger(__name__)

# -174 dBm/Hz thermal noise density
THERMAL_NOISE_W_HZ = 10 ** (-174.0 / 10.0) / 1000.0

RADIAL_DISTRIBUTIONS = ('uniform_radius', 'uniform_area')
MMW_TIME_MODES = ('fixed', 'tdma_share')
ESCALATION_MODES = ('global', 'per_ua')
# fields that must hold integers
INTEGER_FIELDS = ('num_ues', 'uas_per_ue', 'mmw_quota', 'escalation_cap', 'transfer_cap', 'rng_seed')


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical, protocol and algorithm parameters of one simulated cell.

    Every default is the value of the reference parameter table; the
    ``_check_*`` methods run on construction and raise ``ValidationError``
    naming the offending field.
    """

    # Geometry
    cell_radius_m: float = 200.0
    min_distance_m: float = 5.0
    radial_distribution: str = 'uniform_radius'

    # Population
    num_ues: int = 10
    uas_per_ue: int = 3
    bits_required: float = 10e3
    qos_horizons: Tuple[int, ...] = (2,)
    qos_weights: Optional[Tuple[float, ...]] = None

    # Microwave band (OFDMA)
    muw_bandwidth_hz: float = 10e6
    muw_rb_bandwidth_hz: float = 180e3
    muw_pathloss_alpha_db: float = 38.0
    muw_pathloss_beta: float = 3.0
    muw_shadow_sigma_db: float = 10.0

    # Millimeter-wave band (TDMA)
    mmw_bandwidth_hz: float = 1e9
    mmw_rb_bandwidth_hz: float = 180e3
    mmw_pathloss_alpha_db: float = 70.0
    mmw_pathloss_beta: float = 2.0
    mmw_shadow_sigma_db: float = 5.2
    rician_k: float = 2.4
    beam_gain_dbi: float = 18.0

    # Timing
    slot_duration_s: float = 10e-3
    mmw_tx_time_s: float = 0.1e-3
    mmw_time_mode: str = 'fixed'

    noise_density_w_hz: float = THERMAL_NOISE_W_HZ

    # Algorithm
    mmw_quota: int = 20
    escalation_step: float = 0.01
    escalation_mode: str = 'global'
    escalation_cap: int = 10 ** 6
    transfer_cap: int = 10 ** 5
    group_count_weight: float = 1.0
    group_power_weight: float = 1.0

    rng_seed: int = 0

    def __post_init__(self):
        if any(not _is_integer(t) for t in self.qos_horizons):
            raise ValidationError('qos_horizons', 'every horizon must be an integer number of slots')
        # JSON gives lists; keep the record hashable
        object.__setattr__(self, 'qos_horizons', tuple(int(t) for t in self.qos_horizons))
        if self.qos_weights is not None:
            object.__setattr__(self, 'qos_weights', tuple(float(w) for w in self.qos_weights))
        self.validate()

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def validate(self):
        """Run every constraint check, the integer fields first"""
        for name in INTEGER_FIELDS:
            value = getattr(self, name)
            if not _is_integer(value):
                raise ValidationError(name, f'must be an integer, got {value!r}')
        for name in sorted(dir(self)):
            if name.startswith('_check_'):
                getattr(self, name)()

    def _check_geometry(self):
        if not 0 < self.min_distance_m < self.cell_radius_m:
            raise ValidationError(
                'min_distance_m', 'must satisfy 0 < min_distance_m < cell_radius_m')
        if self.radial_distribution not in RADIAL_DISTRIBUTIONS:
            raise ValidationError(
                'radial_distribution', f"must be one of {', '.join(RADIAL_DISTRIBUTIONS)}")

    def _check_population(self):
        if self.num_ues < 1:
            raise ValidationError('num_ues', 'must be at least 1')
        if self.uas_per_ue < 1:
            raise ValidationError('uas_per_ue', 'must be at least 1')
        if not self.bits_required > 0:
            raise ValidationError('bits_required', 'must be positive')

    def _check_qos(self):
        if not self.qos_horizons:
            raise ValidationError('qos_horizons', 'at least one horizon is required')
        if any(t < 1 for t in self.qos_horizons):
            raise ValidationError('qos_horizons', 'every horizon must be at least 1 slot')
        if len(set(self.qos_horizons)) != len(self.qos_horizons):
            raise ValidationError('qos_horizons', 'horizons must be distinct')
        if self.qos_weights is not None:
            if len(self.qos_weights) != len(self.qos_horizons):
                raise ValidationError('qos_weights', 'must have one weight per horizon')
            if any(w < 0 for w in self.qos_weights) or not sum(self.qos_weights) > 0:
                raise ValidationError('qos_weights', 'weights must be non-negative with a positive sum')

    def _check_bands(self):
        for prefix in ('muw', 'mmw'):
            total = getattr(self, f'{prefix}_bandwidth_hz')
            per_rb = getattr(self, f'{prefix}_rb_bandwidth_hz')
            if not per_rb > 0:
                raise ValidationError(f'{prefix}_rb_bandwidth_hz', 'must be positive')
            if not total > 0:
                raise ValidationError(f'{prefix}_bandwidth_hz', 'must be positive')
            if _rb_count(total, per_rb) < 1:
                raise ValidationError(
                    f'{prefix}_bandwidth_hz', 'must hold at least one resource block')
            if not getattr(self, f'{prefix}_pathloss_beta') > 0:
                raise ValidationError(f'{prefix}_pathloss_beta', 'must be positive')
            if getattr(self, f'{prefix}_shadow_sigma_db') < 0:
                raise ValidationError(f'{prefix}_shadow_sigma_db', 'must be non-negative')
        if self.rician_k < 0:
            raise ValidationError('rician_k', 'must be non-negative')

    def _check_timing(self):
        if not self.slot_duration_s > 0:
            raise ValidationError('slot_duration_s', 'must be positive')
        if not self.mmw_tx_time_s > 0:
            raise ValidationError('mmw_tx_time_s', 'must be positive')
        if self.mmw_time_mode not in MMW_TIME_MODES:
            raise ValidationError('mmw_time_mode', f"must be one of {', '.join(MMW_TIME_MODES)}")
        if self.mmw_time_mode == 'tdma_share' and self.mmw_quota * self.mmw_tx_time_s >= self.slot_duration_s:
            raise ValidationError(
                'mmw_quota', 'beam-training overhead of the mmW quota exceeds the slot duration')
        if not self.noise_density_w_hz > 0:
            raise ValidationError('noise_density_w_hz', 'must be positive')

    def _check_algorithm(self):
        if self.mmw_quota < 0:
            raise ValidationError('mmw_quota', 'must be non-negative')
        if not self.escalation_step > 0:
            raise ValidationError('escalation_step', 'must be positive')
        if self.escalation_mode not in ESCALATION_MODES:
            raise ValidationError('escalation_mode', f"must be one of {', '.join(ESCALATION_MODES)}")
        if self.escalation_cap < 1:
            raise ValidationError('escalation_cap', 'must be at least 1')
        if self.transfer_cap < 1:
            raise ValidationError('transfer_cap', 'must be at least 1')
        if self.group_count_weight < 0 or self.group_power_weight < 0:
            raise ValidationError('group_count_weight', 'grouping weights must be non-negative')

    # ------------------------------------------------------------------
    # Derived values
    # ------------------------------------------------------------------

    @property
    def muw_rb_count(self) -> int:
        return _rb_count(self.muw_bandwidth_hz, self.muw_rb_bandwidth_hz)

    @property
    def mmw_rb_count(self) -> int:
        return _rb_count(self.mmw_bandwidth_hz, self.mmw_rb_bandwidth_hz)

    @property
    def beam_gain_linear(self) -> float:
        return 10 ** (self.beam_gain_dbi / 10.0)

    @property
    def muw_pathloss(self) -> PathLossParams:
        return PathLossParams(self.muw_pathloss_alpha_db, self.muw_pathloss_beta, self.muw_shadow_sigma_db)

    @property
    def mmw_pathloss(self) -> PathLossParams:
        return PathLossParams(self.mmw_pathloss_alpha_db, self.mmw_pathloss_beta, self.mmw_shadow_sigma_db)

    @property
    def max_horizon(self) -> int:
        return max(self.qos_horizons)

    def mmw_slot_time(self, quota_effective: int) -> float:
        """Per-UA mmW transmission time for a slot serving ``quota_effective`` UAs"""
        if self.mmw_time_mode == 'tdma_share' and quota_effective > 0:
            return (self.slot_duration_s - quota_effective * self.mmw_tx_time_s) / quota_effective
        return self.mmw_tx_time_s

    def replace(self, **changes) -> 'ScenarioConfig':
        """Return a re-validated copy with ``changes`` applied"""
        return dataclasses.replace(self, **changes)

    @classmethod
    def field_names(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def to_dict(self):
        values = dataclasses.asdict(self)
        values['qos_horizons'] = list(self.qos_horizons)
        if self.qos_weights is not None:
            values['qos_weights'] = list(self.qos_weights)
        return values


def _is_integer(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _rb_count(total_hz: float, per_rb_hz: float) -> int:
    # slack absorbs float error on exact ratios such as 1e6/1e5
    return int(math.floor(total_hz / per_rb_hz * (1.0 + 1e-12)))
