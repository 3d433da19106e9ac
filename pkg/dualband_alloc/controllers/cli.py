# -*- coding: utf-8 -*-

import argparse
import logging
from pathlib import Path

import pandas as pd

from .. import __version__
from ..exceptions import DualBandError, UserError
from ..models.scenario_config import ScenarioConfig
from ..services.channel_service import noise_frame
from ..services.scenario_service import load_config
from ..services.simulation_service import ALGORITHMS, SWEEP_VARIABLES, SimulationService, draw_scenario

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TRIAL_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dualband_alloc',
        description='Dual-band (mmW + uW) resource-block and power allocation simulator',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', help='JSON configuration file; absent keys keep their defaults')
    parser.add_argument('--seed', type=int, help='base seed, overrides rng_seed of the configuration')
    parser.add_argument('--trials', type=int, default=1, help='independent trials per point (default: 1)')
    parser.add_argument('--algorithm', default='gb-eod',
                        help=f"comma-separated list from: {', '.join(ALGORITHMS)} (default: gb-eod)")
    parser.add_argument('--sweep', choices=SWEEP_VARIABLES, help='configuration field to sweep')
    parser.add_argument('--values', help='comma-separated integer values of the swept field')
    parser.add_argument('--out', default='out', help='output directory (default: out)')
    parser.add_argument('--dump-noise', action='store_true', help='write noise.csv for the last trial')
    parser.add_argument('--dump-groups', action='store_true', help='write groups.csv for the last trial')
    parser.add_argument('--trace-descent', action='store_true',
                        help='write descent_trace.csv with every uW ownership transfer of the last trial')
    parser.add_argument('--audit', action='store_true', help='re-check every allocation against the constraints')
    parser.add_argument('--workers', type=int, default=1, help='worker processes for trials (default: 1)')
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    return parser


def _parse_values(raw):
    if not raw:
        raise UserError('--values is required with --sweep')
    try:
        return [int(item) for item in raw.split(',') if item.strip()]
    except ValueError as e:
        raise UserError(f"--values must be comma-separated integers: {str(e)}") from e


def _parse_algorithms(raw):
    names = [name.strip() for name in raw.split(',') if name.strip()]
    unknown = [name for name in names if name not in ALGORITHMS]
    if unknown or not names:
        raise UserError(f"Unknown algorithm(s) {', '.join(unknown) or raw!r}; "
                        f"expected: {', '.join(ALGORITHMS)}")
    return names


def _load(args) -> ScenarioConfig:
    config = load_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        config = config.replace(rng_seed=args.seed)
    if args.trials < 1:
        raise UserError('--trials must be at least 1')
    if args.workers < 1:
        raise UserError('--workers must be at least 1')
    return config


def export_last_trial(service: SimulationService, args, report, config: ScenarioConfig, out: Path):
    """allocation.csv and the optional tables of the last successful trial"""
    service.export(service.allocation_frame(report), out / 'allocation.csv')
    if args.dump_groups:
        service.export(service.groups_frame(report), out / 'groups.csv')
    if args.trace_descent:
        service.export(service.descent_frame(report), out / 'descent_trace.csv')
    if args.dump_noise:
        scenario = draw_scenario(config, report.seed)
        service.export(noise_frame(scenario.maps), out / 'noise.csv')


def run_sweep(service: SimulationService, args, algorithms, out: Path) -> int:
    result = service.sweep(args.sweep, _parse_values(args.values), args.trials, algorithms)
    service.export(result['results'], out / 'results.csv')
    service.export(result['trials'], out / 'trials.csv')
    service.export(result['failures'], out / 'failures.csv')
    if result['last_report'] is not None:
        export_last_trial(service, args, result['last_report'], result['last_config'], out)
    return EXIT_OK if result['success'] else EXIT_TRIAL_FAILED


def run_trials(service: SimulationService, args, algorithms, out: Path) -> int:
    trial_frames = []
    failure_frames = []
    last_report = None
    for algorithm in algorithms:
        results = service.run_trials(args.trials, algorithm)
        trial_frames.append(service.trials_frame(results))
        failure_frames.append(service.failures_frame(results, algorithm))
        succeeded = [result['report'] for result in results if result['success']]
        if succeeded:
            last_report = succeeded[-1]
            _logger.info(f"{algorithm}: mean total power "
                         f"{sum(r.total_power for r in succeeded) / len(succeeded):.6e} W "
                         f"over {len(succeeded)} trials")

    failures = pd.concat(failure_frames, ignore_index=True)
    service.export(pd.concat(trial_frames, ignore_index=True), out / 'trials.csv')
    service.export(failures, out / 'failures.csv')
    if last_report is not None:
        export_last_trial(service, args, last_report, service.config, out)
    return EXIT_OK if failures.empty else EXIT_TRIAL_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        config = _load(args)
        algorithms = _parse_algorithms(args.algorithm)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        service = SimulationService(config, workers=args.workers, audit=args.audit)
        if args.sweep:
            status = run_sweep(service, args, algorithms, out)
        else:
            status = run_trials(service, args, algorithms, out)
    except UserError as e:
        _logger.error(str(e))
        return EXIT_USAGE
    except DualBandError as e:
        _logger.error(f"Simulation failed: {str(e)}")
        return EXIT_TRIAL_FAILED

    violations = [entry for entry in service.run_log.entries if entry.status == 'warning']
    if violations:
        _logger.error(f"{len(violations)} trials violated a constraint; see the log above")
        return EXIT_TRIAL_FAILED
    return status
