#!/usr/bin/env python3
"""
Run the 8-cell comparison grid and check the results

This script:
1. Runs BT mesh and NDN on the full mesh and the line, both traffic patterns
2. Writes one directory per (scenario, seed) plus summary.csv
3. Evaluates the acceptance checks and writes acceptance.json

Usage: python run_paper_suite.py
"""

import os
import sys
from datetime import datetime
from pathlib import Path

from dotenv import load_dotenv

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from meshsim.harness import paper_suite, report, run_batch

# Load environment variables from .env file
load_dotenv()

# =============================================================================
# CONFIGURATION - Loaded from .env file
# =============================================================================

OUTPUT_DIR = Path(os.getenv('MESHSIM_OUTPUT_DIR', 'results')) / 'paper-suite'
WORKERS = int(os.getenv('MESHSIM_WORKERS', '1'))
SEEDS = [int(s) for s in os.getenv('PAPER_SUITE_SEEDS', '1,2,3').split(',') if s.strip()]
ITEMS_PER_PRODUCER = int(os.getenv('PAPER_SUITE_ITEMS', '100'))

# =============================================================================
# MAIN SCRIPT - No need to modify below this line
# =============================================================================


def log_message(message):
    """Simple logging function"""
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    print(f"[{timestamp}] {message}")


def main():
    log_message("=" * 50)
    log_message("Starting paper-suite run")
    log_message(f"Seeds: {SEEDS}, items per producer: {ITEMS_PER_PRODUCER}, workers: {WORKERS}")
    log_message("=" * 50)

    batch = paper_suite(items_per_producer=ITEMS_PER_PRODUCER, seeds=SEEDS)
    outcome = run_batch(batch, OUTPUT_DIR, workers=WORKERS)
    for failure in outcome.failures:
        log_message(f"FAILED: {failure}")
    if not outcome.rows:
        log_message("No run completed, nothing to report")
        return 3

    checked = report(OUTPUT_DIR, check=True)
    for verdict in checked.verdicts:
        state = {True: 'PASS', False: 'FAIL', None: 'n/a'}[verdict.passed]
        log_message(f"Criterion {verdict.criterion} ({verdict.name}): {state}")
        log_message(f"    {verdict.detail}")

    log_message("=" * 50)
    log_message("PROCESSING COMPLETE")
    log_message(f"Runs written: {len(outcome.rows)}, failed: {len(outcome.failures)}")
    log_message(f"Summary: {checked.summary_path}")
    log_message("=" * 50)
    return 0 if outcome.ok else 3


if __name__ == "__main__":
    sys.exit(main())
