# -*- coding: utf-8 -*-

import numpy as np
import pytest

from dualband_alloc.models import ScenarioConfig


@pytest.fixture
def config():
    return ScenarioConfig()


@pytest.fixture
def unit_config():
    """tau = omega1 = 1 and four uW RBs"""
    return ScenarioConfig(muw_bandwidth_hz=4.0, muw_rb_bandwidth_hz=1.0, slot_duration_s=1.0)


@pytest.fixture
def small_config():
    """A handful of UEs with a small mmW quota so both bands carry traffic"""
    return ScenarioConfig(num_ues=4, mmw_quota=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def log_uniform_noises(rng, size, decades=6.0, low=1e-12):
    """Noises spread log-uniformly over ``decades`` decades"""
    return low * 10.0 ** rng.uniform(0.0, decades, size)
