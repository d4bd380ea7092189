#!/usr/bin/env python3
"""
Traffic Report

Per-node load tables from the traffic.csv files of completed runs: original
frames, retransmissions and receptions, plus the share each node carries.

Usage: python traffic_report.py [results-dir]
"""

import sys
from pathlib import Path

import pandas as pd

# Add the root directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from meshsim.data_processing import calculate_stats
from meshsim.file_ops import write_csv
from meshsim.harness import load_runs


def node_load_table(traffic):
    """Add total and share columns to one run's traffic table."""
    table = traffic.copy()
    table['tx_total'] = table['tx_original'] + table['tx_retx']
    total = int(table['tx_total'].sum())
    table['tx_share'] = (table['tx_total'] / total).round(4) if total else 0.0
    return table


def print_run(run, table):
    print(f"\n=== {run.scenario} (seed {run.seed}) ===")
    print(table.to_string(index=False))
    busiest = table.loc[table['tx_total'].idxmax()]
    print(f"   Total frames: {int(table['tx_total'].sum())}")
    print(f"   Retransmissions: {int(table['tx_retx'].sum())}")
    print(f"   Busiest node: {int(busiest['node'])} ({int(busiest['tx_total'])} frames)")
    stats = calculate_stats(table["tx_total"].tolist())
    print(f"   Per-node frames: mean {stats['mean']:.1f}, median {stats['median']:.1f}, "
          f"min {stats['min']:.0f}, max {stats['max']:.0f}")


def main():
    """Main function to run the traffic report."""
    results_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path('results')
    print("=== Traffic Report ===")

    runs = load_runs(results_dir)
    rows = []
    for run in runs:
        table = node_load_table(run.traffic)
        print_run(run, table)
        for record in table.to_dict('records'):
            rows.append({'scenario': run.scenario, 'seed': run.seed, **record})

    frame = pd.DataFrame(rows)
    per_scenario = frame.groupby('scenario')[['tx_original', 'tx_retx', 'rx']].sum()
    print("\n=== Totals per scenario (all seeds) ===")
    print(per_scenario.to_string())

    output = write_csv(rows, ['scenario', 'seed', 'node', 'tx_original', 'tx_retx', 'rx',
                              'tx_total', 'tx_share'], results_dir / 'traffic_report.csv')
    print(f"\nNode load table written to {output}")


if __name__ == "__main__":
    main()
