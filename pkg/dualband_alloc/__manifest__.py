# -*- coding: utf-8 -*-
{
    'name': 'Dual-Band Allocator',
    'version': '1.0.0',
    'category': 'Simulation',
    'summary': 'Joint mmW/uW resource-block and power allocation for dual-mode base stations',
    'description': """
Dual-Band Allocator
===================

Simulator and solver library for a base station serving user applications over
a millimeter-wave band (TDMA, beamformed) and a microwave band (OFDMA):

* **Scenario generation**: random cell topology, demands and QoS classes
* **Channel model**: path loss, shadowing, Rayleigh / Rician block fading
* **Group-based scheduling**: balanced partition of a QoS class into slots
* **mmW selection**: greedy minimum-power selection of N' applications
* **uW allocation (EOD)**: KKT rate estimation, feasibility escalation,
  water-filling and ownership-transfer descent
* **Baselines**: round-robin, random, random grouping
* **Oracles**: exhaustive references for desk-scale verification
* **Sweeps**: Monte Carlo sweeps over UE count and mmW quota, CSV output
    """,
    'license': 'AGPL-3',
    'external_dependencies': {
        'python': ['numpy', 'scipy', 'pandas', 'tqdm'],
    },
}
