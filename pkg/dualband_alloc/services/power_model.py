# -*- coding: utf-8 -*-
"""Rate/power conversions and the closed-form minimum-power water-filling.

For a UA that must deliver ``b`` bits in ``tau`` seconds over RBs of width
``omega`` with effective noises ``N_r``, the minimum total power is reached
with a common water level ``G`` over an active set ``A``:

    G = (prod_{r in A} N_r) ** (1/|A|) * 2 ** (b / (tau * omega * |A|))
    p_r = G - N_r,   R_r = omega * log2(G / N_r)

Every active RB satisfies ``N_r < G`` and every inactive one ``N_r >= G``.
"""

import logging
import math

import numpy as np

from ..exceptions import DomainError
from ..models.allocation import RbSetSolution

_logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


def power_from_rate(noise, rate, omega):
    """Transmit power that carries ``rate`` bit/s over one RB: N (2^(R/omega) - 1)"""
    rate = np.asarray(rate, dtype=float)
    if np.any(rate < 0):
        raise DomainError(f"Rate must be non-negative, got {rate}")
    result = np.asarray(noise, dtype=float) * np.expm1(rate / omega * LN2)
    return float(result) if result.ndim == 0 else result


def rate_from_power(noise, power, omega):
    """Rate carried by ``power`` over one RB: omega log2(1 + p / N)"""
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise DomainError(f"Power must be non-negative, got {power}")
    result = omega * np.log1p(power / np.asarray(noise, dtype=float)) / LN2
    return float(result) if result.ndim == 0 else result


def min_power_waterfill(noises, bits, tau, omega, rbs=None) -> RbSetSolution:
    """Minimum-power split of ``bits`` over the candidate RBs.

    ``noises`` are the effective noises of the candidate RBs and ``rbs`` their
    band indices (defaults to 0..len-1). The active set is the longest prefix
    of the ascending noises whose water level exceeds its largest member.
    """
    noises = np.asarray(noises, dtype=float)
    if noises.ndim != 1 or noises.size == 0:
        raise DomainError('At least one candidate RB is required')
    if np.any(noises <= 0):
        raise DomainError('Effective noise must be positive')
    if bits < 0:
        raise DomainError(f"Demand must be non-negative, got {bits}")
    rbs = np.arange(noises.size) if rbs is None else np.asarray(rbs, dtype=int)

    size = noises.size
    zeros = np.zeros(size)
    if bits == 0:
        return RbSetSolution(rbs, np.zeros(size, dtype=bool), zeros, zeros.copy(), 0.0, 0.0)

    # stable sort keeps ties ordered by position
    order = np.argsort(noises, kind='stable')
    log_sorted = np.log2(noises[order])
    counts = np.arange(1, size + 1)
    exponent = bits / (tau * omega)
    log_levels = np.cumsum(log_sorted) / counts + exponent / counts
    admissible = log_sorted < log_levels
    # admissible prefixes are contiguous: leaving the prefix never re-enters it
    active_count = size if admissible.all() else int(np.argmin(admissible))
    active_count = max(active_count, 1)
    log_level = log_levels[active_count - 1]
    level = 2.0 ** log_level

    active_mask = np.zeros(size, dtype=bool)
    active_mask[order[:active_count]] = True
    per_rb_power = np.where(active_mask, level - noises, 0.0)
    per_rb_rate = np.where(active_mask, omega * (log_level - np.log2(noises)), 0.0)
    total = float(active_count * level - noises[order[:active_count]].sum())
    return RbSetSolution(rbs, active_mask, per_rb_power, per_rb_rate, total, float(level))


def waterfill_summary(noises, bits, tau, omega):
    """(total power, water level) of :func:`min_power_waterfill` without building the solution"""
    noises = np.asarray(noises, dtype=float)
    if bits == 0:
        return 0.0, 0.0
    sorted_noises = np.sort(noises)
    log_sorted = np.log2(sorted_noises)
    counts = np.arange(1, noises.size + 1)
    log_levels = np.cumsum(log_sorted) / counts + bits / (tau * omega) / counts
    admissible = log_sorted < log_levels
    active_count = noises.size if admissible.all() else max(int(np.argmin(admissible)), 1)
    level = 2.0 ** log_levels[active_count - 1]
    return float(active_count * level - sorted_noises[:active_count].sum()), float(level)


def set_power(noises, bits, tau, omega) -> float:
    """Minimum total power over the candidate RBs"""
    return waterfill_summary(noises, bits, tau, omega)[0]
