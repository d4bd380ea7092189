"""
Batch execution and run-directory I/O.

Layout of an output directory:

    <out>/<scenario>/seed-<n>/arrivals.csv
                              traffic.csv
                              cdf.csv
                              manifest.json
    <out>/summary.csv
    <out>/acceptance.json      (report --check)
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from ..automation import run_tasks
from ..errors import MetricsError
from ..file_ops import ensure_directory, find_files, read_csv, read_json, write_csv, write_json
from ..utilities import clean_filename
from .acceptance import Verdict, evaluate_acceptance
from .config import BatchConfig, ScenarioConfig
from .metrics import (
    ARRIVAL_COLUMNS,
    CDF_COLUMNS,
    SUMMARY_COLUMNS,
    TRAFFIC_COLUMNS,
    ArrivalRecord,
    TrafficRecord,
    aggregate_summary,
    cdf_rows,
    compute_cdf,
    records_from_frame,
    success_rate,
    summary_row,
    traffic_from_frame,
)
from .scenarios import RunResult, check_conservation, run_scenario

logger = logging.getLogger(__name__)

ARRIVALS_FILE = 'arrivals.csv'
TRAFFIC_FILE = 'traffic.csv'
CDF_FILE = 'cdf.csv'
MANIFEST_FILE = 'manifest.json'
SUMMARY_FILE = 'summary.csv'
ACCEPTANCE_FILE = 'acceptance.json'


def run_directory(out_dir: Union[str, Path], cfg: ScenarioConfig) -> Path:
    return Path(out_dir) / clean_filename(cfg.name) / f"seed-{cfg.seed}"


def _write_cdf(records: Sequence[ArrivalRecord], directory: Path) -> Path:
    try:
        rows = cdf_rows(compute_cdf(records))
    except MetricsError:
        rows = []
    return write_csv(rows, CDF_COLUMNS, directory / CDF_FILE)


def write_run(result: RunResult, directory: Union[str, Path]) -> Path:
    """
    Write one run's CSVs and manifest.

    Returns:
        The run directory
    """
    directory = ensure_directory(directory)
    write_csv([r.as_row() for r in result.arrivals], ARRIVAL_COLUMNS, directory / ARRIVALS_FILE)
    write_csv([t.as_row() for t in result.traffic], TRAFFIC_COLUMNS, directory / TRAFFIC_FILE)
    _write_cdf(result.arrivals, directory)

    cfg = result.config
    manifest = {
        'scenario': cfg.name,
        'seed': cfg.seed,
        'stack': cfg.stack,
        'topology': cfg.topology,
        'pattern': cfg.pattern,
        'trace_digest': result.digest,
        'frames_total': result.frames_total,
        'frames_delivered': result.frames_delivered,
        'events': result.events,
        'end_time_us': result.end_time_us,
        'items': len(result.arrivals),
        'delivered': result.delivered,
        'partial': result.partial,
        'config': cfg.to_dict(),
    }
    write_json(manifest, directory / MANIFEST_FILE)
    logger.info("Wrote run %s seed %d to %s", cfg.name, cfg.seed, directory)
    return directory


def execute_job(job: Dict[str, Any]) -> Dict[str, Any]:
    """Run one (scenario, seed) job and write its directory; returns its summary row."""
    cfg = ScenarioConfig.from_dict(job['config'])
    result = run_scenario(cfg)
    for problem in check_conservation(result):
        logger.error("Run %s seed %d: %s", cfg.name, cfg.seed, problem)
    write_run(result, run_directory(job['out_dir'], cfg))
    return summary_row(cfg.name, cfg.seed, result.arrivals, result.traffic)


@dataclass
class BatchOutcome:
    out_dir: Path
    rows: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def write_summary(rows: Sequence[Dict[str, Any]], out_dir: Union[str, Path]) -> Path:
    """Per-run rows followed by mean/min/max rows per scenario."""
    ordered = sorted(rows, key=lambda r: (r['scenario'], r['seed']))
    return write_csv(list(ordered) + aggregate_summary(ordered), SUMMARY_COLUMNS,
                     Path(out_dir) / SUMMARY_FILE)


def run_batch(batch: BatchConfig, out_dir: Union[str, Path], workers: int = 1) -> BatchOutcome:
    """
    Run every (scenario, seed) pair and write summary.csv.

    Failed runs are reported in the outcome; the others still complete.
    """
    out_dir = ensure_directory(out_dir)
    jobs = [{'config': cfg.to_dict(), 'out_dir': str(out_dir)} for cfg in batch.jobs()]
    logger.info("Batch: %d scenario(s) x %d seed(s) with %d worker(s)",
                len(batch.scenarios), len(batch.seeds), workers)

    outcome = BatchOutcome(out_dir)
    for task in run_tasks(execute_job, jobs, max_workers=workers):
        config = task['job']['config']
        if task['success']:
            outcome.rows.append(task['result'])
        else:
            outcome.failures.append(f"{config['name']} seed {config['seed']}: {task['error']}")
    if outcome.rows:
        write_summary(outcome.rows, out_dir)
    logger.info("Batch finished: %d run(s) ok, %d failed", len(outcome.rows), len(outcome.failures))
    return outcome


@dataclass
class RunData:
    """A completed run read back from its directory."""

    directory: Path
    manifest: Dict[str, Any]
    arrivals: pd.DataFrame
    traffic: pd.DataFrame

    @property
    def scenario(self) -> str:
        return self.manifest['scenario']

    @property
    def seed(self) -> int:
        return int(self.manifest['seed'])

    @property
    def stack(self) -> str:
        return self.manifest['stack']

    @property
    def topology(self) -> str:
        return self.manifest['topology']

    @property
    def pattern(self) -> str:
        return self.manifest['pattern']

    def records(self) -> List[ArrivalRecord]:
        return records_from_frame(self.arrivals)

    def traffic_records(self) -> List[TrafficRecord]:
        return traffic_from_frame(self.traffic)


def load_runs(out_dir: Union[str, Path]) -> List[RunData]:
    """
    Read every run directory below out_dir.

    Raises:
        MetricsError: No run directories found
    """
    runs = []
    for manifest_path in find_files(out_dir, MANIFEST_FILE):
        directory = manifest_path.parent
        runs.append(RunData(directory, read_json(manifest_path),
                            read_csv(directory / ARRIVALS_FILE),
                            read_csv(directory / TRAFFIC_FILE)))
    if not runs:
        raise MetricsError(f"no runs found below {out_dir}")
    return runs


@dataclass
class ReportOutcome:
    rows: List[Dict[str, Any]]
    summary_path: Path
    verdicts: Optional[List[Verdict]] = None

    @property
    def accepted(self) -> Optional[bool]:
        if self.verdicts is None:
            return None
        return all(v.passed is not False for v in self.verdicts)


def report(out_dir: Union[str, Path], check: bool = False) -> ReportOutcome:
    """
    Recompute cdf.csv per run and summary.csv from the stored CSVs.

    With check, evaluate the acceptance criteria that apply to the runs
    found and write acceptance.json.
    """
    runs = load_runs(out_dir)
    rows = []
    for run in runs:
        records = run.records()
        _write_cdf(records, run.directory)
        rows.append(summary_row(run.scenario, run.seed, records, run.traffic_records()))
        logger.debug("Report: %s seed %d success %.3f",
                     run.scenario, run.seed, success_rate(records))
    summary_path = write_summary(rows, out_dir)

    outcome = ReportOutcome(rows, summary_path)
    if check:
        outcome.verdicts = evaluate_acceptance(runs)
        write_json({'criteria': [v.as_dict() for v in outcome.verdicts]},
                   Path(out_dir) / ACCEPTANCE_FILE)
    return outcome
