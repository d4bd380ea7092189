"""
Run records and the statistics computed from them.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from ..data_processing import empirical_cdf, percentile
from ..errors import MetricsError
from ..sim_core import SimTime

ARRIVAL_COLUMNS = ['producer', 'seq', 'consumer', 't_start_us', 't_arrival_us', 'delivered']
TRAFFIC_COLUMNS = ['node', 'tx_original', 'tx_retx', 'rx']
CDF_COLUMNS = ['latency_us', 'cumulative_fraction']
SUMMARY_COLUMNS = ['scenario', 'seed', 'success_rate', 'p50_us', 'p80_us', 'p99_us', 'total_tx']


@dataclass(frozen=True)
class ArrivalRecord:
    """One item at one intended consumer, delivered or not."""

    producer: int
    seq: int
    consumer: int
    t_start_us: SimTime
    t_arrival_us: Optional[SimTime] = None

    @property
    def delivered(self) -> bool:
        return self.t_arrival_us is not None

    @property
    def latency_us(self) -> Optional[SimTime]:
        if self.t_arrival_us is None:
            return None
        return self.t_arrival_us - self.t_start_us

    def as_row(self) -> Dict[str, Any]:
        return {
            'producer': self.producer,
            'seq': self.seq,
            'consumer': self.consumer,
            't_start_us': self.t_start_us,
            't_arrival_us': '' if self.t_arrival_us is None else self.t_arrival_us,
            'delivered': self.delivered,
        }


@dataclass(frozen=True)
class TrafficRecord:
    node: int
    tx_original: int
    tx_retransmission: int
    rx: int

    @property
    def tx_total(self) -> int:
        return self.tx_original + self.tx_retransmission

    def as_row(self) -> Dict[str, Any]:
        return {
            'node': self.node,
            'tx_original': self.tx_original,
            'tx_retx': self.tx_retransmission,
            'rx': self.rx,
        }


def delivered_latencies(records: Iterable[ArrivalRecord]) -> List[SimTime]:
    return [r.latency_us for r in records if r.delivered]


def compute_cdf(records: Iterable[ArrivalRecord]) -> List[Tuple[SimTime, float]]:
    """
    Empirical CDF of time to content arrival over delivered records.

    Raises:
        MetricsError: Nothing was delivered
    """
    latencies = delivered_latencies(records)
    if not latencies:
        raise MetricsError("no delivered records to build a CDF from")
    return [(int(value), fraction) for value, fraction in empirical_cdf(latencies)]


def success_rate(records: Sequence[ArrivalRecord]) -> float:
    if not records:
        raise MetricsError("no arrival records")
    return sum(1 for r in records if r.delivered) / len(records)


def total_tx(traffic: Iterable[TrafficRecord]) -> int:
    return sum(t.tx_total for t in traffic)


def summary_row(scenario: str, seed: int, records: Sequence[ArrivalRecord],
                traffic: Sequence[TrafficRecord]) -> Dict[str, Any]:
    """One summary.csv row; percentiles are empty when nothing arrived."""
    latencies = delivered_latencies(records)

    def pct(q: float) -> Any:
        value = percentile(latencies, q)
        return '' if math.isnan(value) else int(value)

    return {
        'scenario': scenario,
        'seed': seed,
        'success_rate': round(success_rate(records), 6),
        'p50_us': pct(50),
        'p80_us': pct(80),
        'p99_us': pct(99),
        'total_tx': total_tx(traffic),
    }


def cdf_rows(cdf: Sequence[Tuple[SimTime, float]]) -> List[Dict[str, Any]]:
    return [{'latency_us': latency, 'cumulative_fraction': round(fraction, 9)}
            for latency, fraction in cdf]


def aggregate_summary(rows: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """
    Mean, min and max of every metric per scenario across seeds.

    Aggregate rows carry 'mean', 'min' or 'max' in the seed column.
    """
    if not rows:
        return []
    frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    metrics = SUMMARY_COLUMNS[2:]
    for column in metrics:
        frame[column] = pd.to_numeric(frame[column], errors='coerce')

    aggregated = []
    for scenario, group in frame.groupby('scenario', sort=True):
        for stat in ('mean', 'min', 'max'):
            row: Dict[str, Any] = {'scenario': scenario, 'seed': stat}
            values = getattr(group[metrics], stat)()
            for column in metrics:
                value = values[column]
                row[column] = '' if pd.isna(value) else round(float(value), 6)
            aggregated.append(row)
    return aggregated


def records_from_frame(frame: pd.DataFrame) -> List[ArrivalRecord]:
    """Rebuild arrival records from an arrivals.csv table."""
    missing = [c for c in ARRIVAL_COLUMNS if c not in frame.columns]
    if missing:
        raise MetricsError(f"arrivals table lacks column(s): {', '.join(missing)}")
    records = []
    for row in frame.itertuples(index=False):
        arrival = row.t_arrival_us
        if isinstance(arrival, str):
            arrival = arrival.strip() or None
        if arrival is not None and pd.isna(arrival):
            arrival = None
        records.append(ArrivalRecord(int(row.producer), int(row.seq), int(row.consumer),
                                     int(row.t_start_us),
                                     None if arrival is None else int(float(arrival))))
    return records


def traffic_from_frame(frame: pd.DataFrame) -> List[TrafficRecord]:
    missing = [c for c in TRAFFIC_COLUMNS if c not in frame.columns]
    if missing:
        raise MetricsError(f"traffic table lacks column(s): {', '.join(missing)}")
    return [TrafficRecord(int(r.node), int(r.tx_original), int(r.tx_retx), int(r.rx))
            for r in frame.itertuples(index=False)]
