"""
Command-line interface.

    meshsim run    --config FILE [--scenario NAME] [--seed N] [--out DIR]
    meshsim batch  (--config FILE | --preset paper-suite) [--seed N ...] [--out DIR] [--workers N]
    meshsim report --out DIR [--check]

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .errors import ConfigError, MeshSimError
from .file_ops import FileOpsError
from .harness import (
    PAPER_SUITE,
    BatchConfig,
    load_batch_config,
    load_settings,
    preset,
    report,
    run_batch,
    run_directory,
    run_scenario,
    write_run,
)

logger = logging.getLogger('meshsim')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

LOG_FORMAT = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format=LOG_FORMAT, datefmt=LOG_DATEFMT, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='meshsim', description='Simulate BT mesh and NDN on a shared radio medium.')
    parser.add_argument('--log-level', default=None,
                        help='DEBUG, INFO, WARNING or ERROR (default: MESHSIM_LOG_LEVEL or INFO)')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='run one scenario')
    run.add_argument('--config', type=Path, help='JSON scenario or batch file')
    run.add_argument('--preset', choices=[PAPER_SUITE], help='take the scenario from a preset')
    run.add_argument('--scenario', help='scenario name when the file holds several')
    run.add_argument('--seed', type=int, help='override the scenario seed')
    run.add_argument('--out', type=Path, help='output root (default: MESHSIM_OUTPUT_DIR)')

    batch = sub.add_parser('batch', help='run scenarios x seeds')
    batch.add_argument('--config', type=Path, help='JSON batch file')
    batch.add_argument('--preset', choices=[PAPER_SUITE], help='built-in scenario grid')
    batch.add_argument('--seed', type=int, action='append', dest='seeds',
                       help='seed to run (repeatable; overrides the file)')
    batch.add_argument('--out', type=Path, help='output root (default: MESHSIM_OUTPUT_DIR)')
    batch.add_argument('--workers', type=int, help='parallel processes (default: MESHSIM_WORKERS)')

    rep = sub.add_parser('report', help='recompute CDFs and summary from run CSVs')
    rep.add_argument('--out', type=Path, help='output root to read (default: MESHSIM_OUTPUT_DIR)')
    rep.add_argument('--check', action='store_true', help='evaluate acceptance criteria')
    return parser


def _load_batch(config: Optional[Path], preset_name: Optional[str],
                seeds: Optional[Sequence[int]]) -> BatchConfig:
    if config is not None and preset_name is not None:
        raise ConfigError("use either --config or --preset, not both")
    if preset_name is not None:
        return preset(preset_name, seeds or (1,))
    if config is None:
        raise ConfigError("--config or --preset is required")
    try:
        return load_batch_config(config, seeds)
    except FileOpsError as e:
        raise ConfigError(str(e)) from e


def _cmd_run(args: argparse.Namespace, out_dir: Path) -> int:
    seeds = [args.seed] if args.seed is not None else None
    batch = _load_batch(args.config, args.preset, seeds)
    scenarios = batch.scenarios
    if args.scenario is not None:
        scenarios = [s for s in scenarios if s.name == args.scenario]
        if not scenarios:
            raise ConfigError(f"no scenario named '{args.scenario}'")
    elif len(scenarios) > 1:
        raise ConfigError("the config holds several scenarios; pick one with --scenario")

    cfg = scenarios[0].with_seed(batch.seeds[0])
    result = run_scenario(cfg)
    directory = write_run(result, run_directory(out_dir, cfg))
    print(f"{cfg.name} seed {cfg.seed}: {result.delivered}/{len(result.arrivals)} delivered, "
          f"{result.frames_total} frames -> {directory}")
    return EXIT_OK


def _cmd_batch(args: argparse.Namespace, out_dir: Path, workers: int) -> int:
    batch = _load_batch(args.config, args.preset, args.seeds)
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("--workers must be at least 1")
        workers = args.workers
    outcome = run_batch(batch, out_dir, workers=workers)
    for failure in outcome.failures:
        logger.error("Run failed: %s", failure)
    print(f"{len(outcome.rows)} run(s) written to {outcome.out_dir}, {len(outcome.failures)} failed")
    return EXIT_OK if outcome.ok else EXIT_RUNTIME


def _cmd_report(args: argparse.Namespace, out_dir: Path) -> int:
    outcome = report(out_dir, check=args.check)
    print(f"summary: {outcome.summary_path}")
    if outcome.verdicts is not None:
        for verdict in outcome.verdicts:
            state = {True: 'PASS', False: 'FAIL', None: 'n/a '}[verdict.passed]
            print(f"  [{state}] {verdict.criterion}. {verdict.name}: {verdict.detail}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings()
    except ConfigError as e:
        configure_logging(args.log_level or 'INFO')
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    configure_logging(args.log_level or settings.log_level)
    out_dir = args.out if args.out is not None else settings.output_dir

    try:
        if args.command == 'run':
            return _cmd_run(args, out_dir)
        if args.command == 'batch':
            return _cmd_batch(args, out_dir, settings.workers)
        return _cmd_report(args, out_dir)
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except (MeshSimError, OSError) as e:
        logger.error("Run failed: %s", e)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
