"""
Experiment Harness

Scenario configuration, topology construction, traffic patterns, run
records, statistics, batch execution and acceptance checks.
"""

from .acceptance import Verdict, evaluate_acceptance
from .batch import (
    BatchOutcome,
    ReportOutcome,
    RunData,
    execute_job,
    load_runs,
    report,
    run_batch,
    run_directory,
    write_run,
    write_summary,
)
from .config import (
    PAPER_SUITE,
    PATTERNS,
    STACKS,
    TOPOLOGIES,
    BatchConfig,
    BtIcnConfig,
    MeshConfig,
    NdnConfig,
    RadioConfig,
    ScenarioConfig,
    Settings,
    batch_from_dict,
    friendship_pairs,
    load_batch_config,
    load_settings,
    paper_suite,
    preset,
)
from .metrics import (
    ArrivalRecord,
    TrafficRecord,
    aggregate_summary,
    compute_cdf,
    success_rate,
    summary_row,
)
from .scenarios import (
    RunResult,
    check_conservation,
    publish_schedule,
    run_many_to_one,
    run_one_to_many,
    run_scenario,
)
from .topology import build_topology, hop_distances, next_hops_toward, provision_ndn_routes

__all__ = [
    'PAPER_SUITE',
    'PATTERNS',
    'STACKS',
    'TOPOLOGIES',
    'ArrivalRecord',
    'BatchConfig',
    'BatchOutcome',
    'BtIcnConfig',
    'MeshConfig',
    'NdnConfig',
    'RadioConfig',
    'ReportOutcome',
    'RunData',
    'RunResult',
    'ScenarioConfig',
    'Settings',
    'TrafficRecord',
    'Verdict',
    'aggregate_summary',
    'batch_from_dict',
    'build_topology',
    'check_conservation',
    'compute_cdf',
    'evaluate_acceptance',
    'execute_job',
    'friendship_pairs',
    'hop_distances',
    'load_batch_config',
    'load_runs',
    'load_settings',
    'next_hops_toward',
    'paper_suite',
    'preset',
    'provision_ndn_routes',
    'publish_schedule',
    'report',
    'run_batch',
    'run_directory',
    'run_many_to_one',
    'run_one_to_many',
    'run_scenario',
    'success_rate',
    'summary_row',
    'write_run',
    'write_summary',
]
