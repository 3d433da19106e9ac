# -*- coding: utf-8 -*-

import json
import logging
from typing import List, Tuple

import numpy as np

from ..exceptions import ConfigParseError, ValidationError
from ..models.scenario_config import ScenarioConfig
from ..models.user_app import QoSClass, UserApp

_logger = logging.getLogger(__name__)

PHYSICAL_STREAM = 0
ALGORITHM_STREAM = 1


def load_config(path) -> ScenarioConfig:
    """Load a flat JSON configuration; absent keys keep their defaults"""
    try:
        with open(path, encoding='utf-8') as handle:
            raw = json.load(handle)
    except FileNotFoundError as e:
        raise ConfigParseError(f"Configuration file not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ConfigParseError(f"Failed to parse configuration {path}: {str(e)}") from e

    if not isinstance(raw, dict):
        raise ConfigParseError(f"Configuration {path} must hold a JSON object")

    known = set(ScenarioConfig.field_names())
    for key in raw:
        if key not in known:
            raise ValidationError(key, 'unknown configuration field')

    try:
        config = ScenarioConfig(**raw)
    except TypeError as e:
        # e.g. a list where a number is expected
        raise ConfigParseError(f"Invalid value types in {path}: {str(e)}") from e
    _logger.info(f"Loaded configuration from {path}: M={config.num_ues}, kappa={config.uas_per_ue}, "
                 f"K1={config.muw_rb_count}, K2={config.mmw_rb_count}, N'={config.mmw_quota}")
    return config


def trial_seed(base_seed: int, index: int) -> int:
    """Independent seed of trial ``index`` derived from the run seed"""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1)[0])


def physical_rng(seed: int) -> np.random.Generator:
    """Stream for topology, fading and shadowing"""
    return np.random.default_rng([seed, PHYSICAL_STREAM])


def algorithm_rng(seed: int) -> np.random.Generator:
    """Stream for randomised grouping and baselines"""
    return np.random.default_rng([seed, ALGORITHM_STREAM])


def generate_topology(cfg: ScenarioConfig, rng: np.random.Generator) -> Tuple[List[UserApp], List[QoSClass]]:
    """Drop ``num_ues`` UEs in the cell and spawn their UAs.

    Distances are uniform in radius over [min_distance, cell_radius] by
    default, or uniform in area with ``radial_distribution='uniform_area'``.
    """
    count = cfg.num_ues
    if cfg.radial_distribution == 'uniform_area':
        distances = np.sqrt(rng.uniform(cfg.min_distance_m ** 2, cfg.cell_radius_m ** 2, count))
    else:
        distances = rng.uniform(cfg.min_distance_m, cfg.cell_radius_m, count)
    angles = rng.uniform(0.0, 2.0 * np.pi, count)

    total_uas = count * cfg.uas_per_ue
    horizons = np.asarray(cfg.qos_horizons)
    if len(horizons) == 1:
        drawn = np.full(total_uas, horizons[0])
    else:
        weights = None
        if cfg.qos_weights is not None:
            weights = np.asarray(cfg.qos_weights) / np.sum(cfg.qos_weights)
        drawn = rng.choice(horizons, size=total_uas, p=weights)

    uas = []
    for ue in range(count):
        for local in range(cfg.uas_per_ue):
            ua_id = ue * cfg.uas_per_ue + local
            uas.append(UserApp(
                ua_id=ua_id,
                ue_id=ue,
                distance_m=float(distances[ue]),
                angle_rad=float(angles[ue]),
                demand_bits=float(cfg.bits_required),
                qos_horizon=int(drawn[ua_id]),
            ))

    classes = []
    for horizon in sorted(cfg.qos_horizons):
        members = tuple(ua.ua_id for ua in uas if ua.qos_horizon == horizon)
        if members:
            classes.append(QoSClass(horizon=horizon, members=members))
    _logger.debug(f"Generated {count} UEs / {total_uas} UAs in {len(classes)} QoS classes")
    return uas, classes
