# -*- coding: utf-8 -*-

import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from ..exceptions import DomainError
from ..models.channel import MMW, MUW, EffectiveNoiseMap, PathLossParams
from ..models.scenario_config import ScenarioConfig
from ..models.user_app import UserApp

_logger = logging.getLogger(__name__)

# Beam gain profile hook: distances (m) -> gain (dBi)
BeamGainProfile = Callable[[np.ndarray], np.ndarray]


def path_loss_db(params: PathLossParams, d, shadow=0.0):
    """alpha + 10 beta log10(d) + shadow, in dB"""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DomainError(f"Distance must be positive, got {d}")
    result = params.alpha_db + 10.0 * params.beta * np.log10(d) + shadow
    return float(result) if np.ndim(result) == 0 else result


def draw_fading(band: str, shape, rng: np.random.Generator, rician_k: float = 0.0) -> np.ndarray:
    """Unit-mean-power complex fading coefficients.

    uW draws Rayleigh coefficients, mmW draws Rician ones with K-factor
    ``rician_k``; both satisfy E[|h|^2] = 1. Zero-magnitude draws are
    resampled.
    """
    if band == MUW:
        sampler = _rayleigh_sampler(rng)
    elif band == MMW:
        sampler = _rician_sampler(rng, rician_k)
    else:
        raise DomainError(f"Unknown band '{band}'")

    gains = sampler(shape)
    degenerate = np.abs(gains) == 0
    while np.any(degenerate):
        gains[degenerate] = sampler(int(np.count_nonzero(degenerate)))
        degenerate = np.abs(gains) == 0
    return gains


def _rayleigh_sampler(rng):
    def sample(shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return sample


def _rician_sampler(rng, k_factor):
    if np.isinf(k_factor):
        def line_of_sight(shape):
            return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, shape))
        return line_of_sight

    los = np.sqrt(k_factor / (k_factor + 1.0))
    scatter = np.sqrt(1.0 / (2.0 * (k_factor + 1.0)))

    def sample(shape):
        phase = rng.uniform(0.0, 2.0 * np.pi, shape)
        nlos = scatter * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        return los * np.exp(1j * phase) + nlos
    return sample


def draw_shadowing(cfg: ScenarioConfig, num_ues: int, rng: np.random.Generator) -> Dict[str, np.ndarray]:
    """Log-normal shadowing in dB, one value per (UE, band)"""
    return {
        MUW: rng.normal(0.0, cfg.muw_shadow_sigma_db, num_ues),
        MMW: rng.normal(0.0, cfg.mmw_shadow_sigma_db, num_ues),
    }


def effective_noise(cfg: ScenarioConfig,
                    uas: Sequence[UserApp],
                    fading: Dict[str, np.ndarray],
                    shadow: Dict[str, np.ndarray],
                    beam_gain_profile: Optional[BeamGainProfile] = None) -> Dict[str, EffectiveNoiseMap]:
    """Effective noise maps of both bands.

    ``fading[band]`` is shaped (ue, rb, slot) and ``shadow[band]`` (ue,); UAs
    of the same UE read the same fading and shadowing.
    uW:  omega1 N0 / (|g|^2 10^(-L1/10))
    mmW: omega2 N0 / (psi |h|^2 10^(-L2/10))
    """
    ue_index = np.array([ua.ue_id for ua in uas], dtype=int)
    distances = np.array([ua.distance_m for ua in uas], dtype=float)
    ua_ids = tuple(ua.ua_id for ua in uas)

    maps = {}
    for band, params, omega in ((MUW, cfg.muw_pathloss, cfg.muw_rb_bandwidth_hz),
                                (MMW, cfg.mmw_pathloss, cfg.mmw_rb_bandwidth_hz)):
        loss_db = path_loss_db(params, distances, shadow[band][ue_index])
        power_gain = np.abs(fading[band][ue_index]) ** 2
        large_scale = 10.0 ** (-loss_db / 10.0)
        if band == MMW:
            if beam_gain_profile is None:
                large_scale = large_scale * cfg.beam_gain_linear
            else:
                large_scale = large_scale * 10.0 ** (np.asarray(beam_gain_profile(distances), dtype=float) / 10.0)
        values = omega * cfg.noise_density_w_hz / (power_gain * large_scale[:, None, None])
        maps[band] = EffectiveNoiseMap(band=band, values=values, ua_ids=ua_ids)
    return maps


def draw_channel(cfg: ScenarioConfig,
                 uas: Sequence[UserApp],
                 horizon: int,
                 rng: np.random.Generator,
                 beam_gain_profile: Optional[BeamGainProfile] = None) -> Dict[str, EffectiveNoiseMap]:
    """Draw shadowing and block fading for every UE and build both noise maps"""
    num_ues = max(ua.ue_id for ua in uas) + 1
    shadow = draw_shadowing(cfg, num_ues, rng)
    fading = {
        MUW: draw_fading(MUW, (num_ues, cfg.muw_rb_count, horizon), rng),
        MMW: draw_fading(MMW, (num_ues, cfg.mmw_rb_count, horizon), rng, cfg.rician_k),
    }
    maps = effective_noise(cfg, uas, fading, shadow, beam_gain_profile)
    _logger.debug(f"Drew channel for {num_ues} UEs over {horizon} slots: "
                  f"uW map {maps[MUW].values.shape}, mmW map {maps[MMW].values.shape}")
    return maps


def noise_frame(maps: Dict[str, EffectiveNoiseMap]) -> pd.DataFrame:
    """Long table (ua, rb, slot, band, value) of the noise maps"""
    frames = []
    for band in (MUW, MMW):
        noise_map = maps[band]
        ua_count, rb_count, slot_count = noise_map.values.shape
        ua_grid, rb_grid, slot_grid = np.meshgrid(
            np.asarray(noise_map.ua_ids), np.arange(rb_count), np.arange(slot_count), indexing='ij')
        frames.append(pd.DataFrame({
            'ua': ua_grid.ravel(),
            'rb': rb_grid.ravel(),
            'slot': slot_grid.ravel(),
            'band': band,
            'value': noise_map.values.ravel(),
        }))
    return pd.concat(frames, ignore_index=True)
