# -*- coding: utf-8 -*-

import logging
import math
import time
from datetime import datetime, timedelta
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats
from tqdm import tqdm

from ..exceptions import DualBandError, TrialError, UserError, ValidationError
from ..models.allocation import TrialReport, TrialScenario
from ..models.channel import MMW, MUW
from ..models.run_log import RunLog
from ..models.scenario_config import ScenarioConfig
from .baseline_service import random_grouping
from .channel_service import draw_channel
from .constraint_audit import audit_trial
from .grouping_service import group_users, grouping_objective, proxy_powers
from .muw_service import allocate_slot
from .scenario_service import algorithm_rng, generate_topology, physical_rng, trial_seed

_logger = logging.getLogger(__name__)

# algorithm name -> (grouping, uW strategy)
ALGORITHMS = {
    'gb-eod': ('gb', 'eod'),
    'random-group+eod': ('random', 'eod'),
    'round-robin': ('gb', 'round-robin'),
    'random': ('gb', 'random'),
}
SWEEP_VARIABLES = ('num_ues', 'mmw_quota')

TRIAL_COLUMNS = ['trial', 'seed', 'algorithm', 'muw_power', 'mmw_power', 'total_power',
                 'grouping_objective', 'escalations', 'transfers']
FAILURE_COLUMNS = ['variable', 'value', 'algorithm', 'seed', 'error']
ALLOCATION_COLUMNS = ['slot', 'band', 'ua_id', 'rb', 'power', 'rate']
GROUP_COLUMNS = ['horizon', 'group', 'ua_id', 'proxy_power']
TRACE_COLUMNS = ['slot', 'horizon', 'iteration', 'rb', 'donor', 'receiver', 'total_power']


def draw_scenario(cfg: ScenarioConfig, seed: int) -> TrialScenario:
    """Topology and noise maps of a trial, from the physical stream only"""
    rng = physical_rng(seed)
    uas, classes = generate_topology(cfg, rng)
    maps = draw_channel(cfg, uas, cfg.max_horizon, rng)
    return TrialScenario(uas=uas, classes=classes, maps=maps)


def run_trial(cfg: ScenarioConfig, seed: int, algorithm: str, keep_scenario: bool = True) -> TrialReport:
    """Group every QoS class and allocate each of its slots on both bands.

    QoS classes are scheduled independently; group ``t`` of a class is
    served in slot ``t``. Allocator errors are re-raised as ``TrialError``
    carrying the seed.
    """
    if algorithm not in ALGORITHMS:
        raise UserError(f"Unknown algorithm '{algorithm}'; expected one of {', '.join(ALGORITHMS)}")
    grouping, strategy = ALGORITHMS[algorithm]
    started = time.perf_counter()
    try:
        scenario = draw_scenario(cfg, seed)
        rng = algorithm_rng(seed)
        proxies = proxy_powers(scenario.uas, cfg)
        demands = scenario.demands
        distances = scenario.distances

        groupings = []
        slots = []
        for qos_class in scenario.classes:
            if grouping == 'gb':
                assignment = group_users(qos_class.members, proxies, qos_class.horizon,
                                         cfg.group_count_weight, cfg.group_power_weight)
            else:
                assignment = random_grouping(qos_class.members, proxies, qos_class.horizon, rng)
            groupings.append(assignment)
            for slot, group in enumerate(assignment.groups):
                slots.append(allocate_slot(group, demands, distances, scenario.maps, slot,
                                           qos_class.horizon, cfg, strategy=strategy, rng=rng))
    except DualBandError as e:
        raise TrialError(seed, str(e)) from e

    objective = float(sum(grouping_objective(assignment) for assignment in groupings))
    return TrialReport(
        seed=seed,
        algorithm=algorithm,
        slots=slots,
        groupings=groupings,
        grouping_objective=objective,
        runtime_ms=(time.perf_counter() - started) * 1000.0,
        scenario=scenario if keep_scenario else None,
    )


def _run_trial_safely(job) -> Dict[str, Any]:
    """Pool worker: trial outcome as a result dict"""
    cfg, index, seed, algorithm, keep_scenario = job
    try:
        report = run_trial(cfg, seed, algorithm, keep_scenario)
        return {'success': True, 'trial': index, 'seed': seed, 'report': report}
    except TrialError as e:
        return {'success': False, 'trial': index, 'seed': seed, 'error': str(e)}


def _summary(values: Sequence[float]) -> Dict[str, float]:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {'mean': math.nan, 'std': math.nan, 'sem': math.nan}
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return {'mean': float(values.mean()), 'std': std, 'sem': std / math.sqrt(values.size)}


class SimulationService:
    """Runs trials, sweeps and paired comparisons for one base configuration"""

    def __init__(self, config: ScenarioConfig, workers: int = 1, audit: bool = False):
        self.config = config
        self.workers = max(1, int(workers))
        self.audit = audit
        self.run_log = RunLog()

    # ------------------------------------------------------------------
    # Trials
    # ------------------------------------------------------------------

    def run_trial(self, seed: int, algorithm: str = 'gb-eod', keep_scenario: bool = True) -> TrialReport:
        try:
            report = run_trial(self.config, seed, algorithm, keep_scenario=keep_scenario or self.audit)
        except TrialError as e:
            _logger.error(str(e))
            self.run_log.log_error('trial', 'Trial failed', error_message=str(e), algorithm=algorithm, seed=seed)
            raise
        self._record(report)
        return report

    def run_trials(self, trials: int, algorithm: str = 'gb-eod', base_seed: Optional[int] = None,
                   config: Optional[ScenarioConfig] = None, keep_scenario: bool = False) -> List[Dict[str, Any]]:
        """Result dicts of ``trials`` independent trials, in trial order"""
        config = config or self.config
        base_seed = config.rng_seed if base_seed is None else base_seed
        jobs = [(config, index, trial_seed(base_seed, index), algorithm, keep_scenario or self.audit)
                for index in range(trials)]
        if self.workers > 1 and trials > 1:
            with Pool(self.workers) as pool:
                results = pool.map(_run_trial_safely, jobs)
        else:
            results = [_run_trial_safely(job) for job in jobs]

        for result in results:
            if result['success']:
                self._record(result['report'], config)
                if not keep_scenario:
                    result['report'].scenario = None
            else:
                _logger.error(result['error'])
                self.run_log.log_error('trial', 'Trial failed', error_message=result['error'],
                                       algorithm=algorithm, seed=result['seed'])
        return results

    def _record(self, report: TrialReport, config: Optional[ScenarioConfig] = None):
        config = config or self.config
        if self.audit and report.scenario is not None:
            scenario = report.scenario
            violations = audit_trial(report, scenario.maps, scenario.demands, scenario.classes, config)
            if violations:
                self.run_log.log_warning('trial', f"{len(violations)} constraint violations",
                                         details='\n'.join(violations), algorithm=report.algorithm,
                                         seed=report.seed)
        _logger.debug(f"Trial seed {report.seed} ({report.algorithm}): total {report.total_power:.6e} W "
                      f"in {report.runtime_ms:.1f} ms")
        finished = datetime.now()
        self.run_log.log_success('trial', 'Trial completed', algorithm=report.algorithm, seed=report.seed,
                                 start_time=finished - timedelta(milliseconds=report.runtime_ms), end_time=finished)

    # ------------------------------------------------------------------
    # Sweeps and comparisons
    # ------------------------------------------------------------------

    def sweep(self, variable: str, values: Sequence, trials: int, algorithms: Sequence[str] = ('gb-eod',),
              base_seed: Optional[int] = None, progress: bool = True) -> Dict[str, Any]:
        """Mean/std/sem of per-band power for every (value, algorithm) point.

        A point whose configuration is invalid, or whose trials fail, is
        recorded and the sweep moves on. ``last_report`` is the last
        successful trial of the sweep and ``last_config`` its configuration,
        both ``None`` when no trial succeeded.
        """
        if variable not in SWEEP_VARIABLES:
            raise UserError(f"Cannot sweep '{variable}'; expected one of {', '.join(SWEEP_VARIABLES)}")
        unknown = [name for name in algorithms if name not in ALGORITHMS]
        if unknown:
            raise UserError(f"Unknown algorithm(s): {', '.join(unknown)}")

        rows = []
        failures = []
        trial_rows = []
        last_report = last_config = None
        points = [(value, algorithm) for value in values for algorithm in algorithms]
        for value, algorithm in tqdm(points, desc=f"sweep {variable}", disable=not progress):
            try:
                config = self.config.replace(**{variable: value})
            except ValidationError as e:
                _logger.warning(f"Sweep point {variable}={value} skipped: {str(e)}")
                self.run_log.log_error('sweep_point', 'Invalid sweep point', error_message=str(e),
                                       algorithm=algorithm, variable=variable, value=value)
                failures.append({'variable': variable, 'value': value, 'algorithm': algorithm,
                                 'seed': None, 'error': str(e)})
                rows.append(self._point_row(variable, value, algorithm, [], trials))
                continue

            started = datetime.now()
            results = self.run_trials(trials, algorithm, base_seed, config=config)
            reports = [result['report'] for result in results if result['success']]
            if reports:
                last_report, last_config = reports[-1], config
            for result in results:
                if not result['success']:
                    failures.append({'variable': variable, 'value': value, 'algorithm': algorithm,
                                     'seed': result['seed'], 'error': result['error']})
            for index, result in enumerate(results):
                if result['success']:
                    row = {'variable': variable, 'value': value}
                    row.update(self._trial_row(index, result['report']))
                    trial_rows.append(row)

            rows.append(self._point_row(variable, value, algorithm, reports, trials))
            if len(reports) < trials:
                _logger.warning(f"Sweep point {variable}={value} ({algorithm}): "
                                f"{trials - len(reports)} of {trials} trials failed")
            self.run_log.log_info('sweep_point', f"{len(reports)} of {trials} trials succeeded",
                                  algorithm=algorithm, variable=variable, value=value,
                                  start_time=started, end_time=datetime.now())
            _logger.info(f"Sweep point {variable}={value} ({algorithm}) done")

        return {
            'success': not failures,
            'results': pd.DataFrame(rows),
            'failures': pd.DataFrame(failures, columns=FAILURE_COLUMNS),
            'trials': pd.DataFrame(trial_rows, columns=['variable', 'value'] + TRIAL_COLUMNS),
            'last_report': last_report,
            'last_config': last_config,
        }

    @staticmethod
    def _point_row(variable, value, algorithm, reports, trials) -> Dict[str, Any]:
        row = {'variable': variable, 'value': value, 'algorithm': algorithm,
               'trials': len(reports), 'failures': trials - len(reports)}
        for band in ('muw', 'mmw', 'total'):
            summary = _summary([getattr(report, f'{band}_power') for report in reports])
            for name, number in summary.items():
                row[f'{band}_{name}'] = number
        return row

    def compare_algorithms(self, first: str, second: str, trials: int, base_seed: Optional[int] = None,
                           metric: str = 'muw_power') -> Dict[str, Any]:
        """Paired comparison of two algorithms on the same draws.

        ``p_value`` is the one-sided paired t-test for ``first`` having the
        lower mean ``metric``. Seeds where either algorithm failed are left
        out of the pairing.
        """
        started = datetime.now()
        first_results = self.run_trials(trials, first, base_seed)
        second_results = self.run_trials(trials, second, base_seed)
        pairs = [(a['report'], b['report']) for a, b in zip(first_results, second_results)
                 if a['success'] and b['success']]
        if len(pairs) < 2:
            message = f"Only {len(pairs)} paired trials succeeded"
            self.run_log.log_error('compare', 'Comparison failed', error_message=message, algorithm=first)
            return {'success': False, 'error': message}

        a = np.array([getattr(pair[0], metric) for pair in pairs])
        b = np.array([getattr(pair[1], metric) for pair in pairs])
        differences = a - b
        if not np.any(differences):
            statistic, p_value = 0.0, 1.0
        else:
            test = stats.ttest_rel(a, b, alternative='less')
            statistic, p_value = float(test.statistic), float(test.pvalue)
        message = (f"{first} vs {second} on {metric}: mean difference {differences.mean():.6e}, "
                   f"p={p_value:.4g} over {len(pairs)} pairs")
        _logger.info(message)
        self.run_log.log_success('compare', message, algorithm=first, start_time=started, end_time=datetime.now())
        return {
            'success': True,
            'pairs': len(pairs),
            'first_mean': float(a.mean()),
            'second_mean': float(b.mean()),
            'mean_difference': float(differences.mean()),
            'first_not_worse': int(np.count_nonzero(a <= b)),
            'statistic': statistic,
            'p_value': p_value,
        }

    # ------------------------------------------------------------------
    # Tables
    # ------------------------------------------------------------------

    @staticmethod
    def _trial_row(index: int, report: TrialReport) -> Dict[str, Any]:
        return {
            'trial': index,
            'seed': report.seed,
            'algorithm': report.algorithm,
            'muw_power': report.muw_power,
            'mmw_power': report.mmw_power,
            'total_power': report.total_power,
            'grouping_objective': report.grouping_objective,
            'escalations': report.escalation_count,
            'transfers': report.transfer_count,
        }

    def trials_frame(self, results: Sequence[Dict[str, Any]]) -> pd.DataFrame:
        rows = [self._trial_row(result['trial'], result['report']) for result in results if result['success']]
        return pd.DataFrame(rows, columns=TRIAL_COLUMNS)

    @staticmethod
    def failures_frame(results: Sequence[Dict[str, Any]], algorithm: str) -> pd.DataFrame:
        rows = [{'variable': None, 'value': None, 'algorithm': algorithm, 'seed': result['seed'],
                 'error': result['error']} for result in results if not result['success']]
        return pd.DataFrame(rows, columns=FAILURE_COLUMNS)

    @staticmethod
    def allocation_frame(report: TrialReport) -> pd.DataFrame:
        """Per-RB power and rate of a trial: every owned uW RB and every active mmW RB"""
        rows = []
        for allocation in report.slots:
            for band, solutions in ((MUW, allocation.muw_solutions), (MMW, allocation.mmw.solutions)):
                for ua in sorted(solutions):
                    solution = solutions[ua]
                    for position, rb in enumerate(solution.rbs):
                        if band == MMW and not solution.active_mask[position]:
                            continue
                        rows.append({
                            'slot': allocation.slot,
                            'band': band,
                            'ua_id': ua,
                            'rb': int(rb),
                            'power': float(solution.per_rb_power[position]),
                            'rate': float(solution.per_rb_rate[position]),
                        })
        return pd.DataFrame(rows, columns=ALLOCATION_COLUMNS)

    @staticmethod
    def groups_frame(report: TrialReport) -> pd.DataFrame:
        rows = [
            {'horizon': assignment.horizon, 'group': index, 'ua_id': ua,
             'proxy_power': assignment.proxy_power[ua]}
            for assignment in report.groupings
            for index, group in enumerate(assignment.groups)
            for ua in group
        ]
        return pd.DataFrame(rows, columns=GROUP_COLUMNS)

    @staticmethod
    def descent_frame(report: TrialReport) -> pd.DataFrame:
        rows = [
            {'slot': allocation.slot, 'horizon': allocation.horizon, 'iteration': step.iteration,
             'rb': step.rb, 'donor': step.donor, 'receiver': step.receiver, 'total_power': step.total_power}
            for allocation in report.slots
            for step in allocation.descent_trace
        ]
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def export(self, frame: pd.DataFrame, path) -> str:
        """Write ``frame`` as CSV with round-trip float formatting"""
        frame.to_csv(path, index=False)
        self.run_log.log_success('export', f"Wrote {len(frame)} rows to {path}")
        _logger.info(f"Wrote {len(frame)} rows to {path}")
        return str(path)
