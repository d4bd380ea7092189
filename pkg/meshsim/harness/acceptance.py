"""
Acceptance checks over completed runs.

Each check applies only to the runs it talks about; with none of them
present its verdict is "not applicable" (passed = None). The share checks
also skip runs with fewer than MIN_SHARE_SAMPLES delivered arrivals.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..data_processing import correlation, fraction_at_most
from ..errors import MetricsError
from ..sim_core import MS, SECOND
from .metrics import compute_cdf, delivered_latencies, success_rate, total_tx

if TYPE_CHECKING:
    from .batch import RunData

logger = logging.getLogger(__name__)

FAST_SHARE_LIMIT_US = 15 * MS
FAST_SHARE_RANGE = (0.70, 0.90)
MAX_MESH_LATENCY_US = 130 * MS
LINEAR_TAIL_US = (15 * MS, 120 * MS)
MIN_TAIL_CORRELATION = 0.95

CACHE_HIT_LATENCY_US = 1 * MS
MIN_CACHE_HIT_SHARE = 0.70

SLOW_LIMIT_US = 20 * MS
SLOW_SHARE_RANGE = (0.02, 0.10)
RETRY_INTERVAL_US = 1 * SECOND
RETRY_SLOW_US = 500 * MS
RETRY_TOLERANCE_US = 250 * MS

# share checks skip runs with fewer delivered arrivals than this
MIN_SHARE_SAMPLES = 50


@dataclass
class Verdict:
    criterion: int
    name: str
    passed: Optional[bool]
    detail: str = ''

    def as_dict(self) -> Dict[str, Any]:
        return {'criterion': self.criterion, 'name': self.name,
                'passed': self.passed, 'detail': self.detail}


def _select(runs: Sequence['RunData'], stack: str, topology: str,
            pattern: str) -> List['RunData']:
    return [r for r in runs if r.stack == stack and r.topology == topology and r.pattern == pattern]


def _not_applicable(criterion: int, name: str) -> Verdict:
    return Verdict(criterion, name, None, 'no matching runs')


def _sampled(selected: Sequence['RunData']) -> Tuple[List[Tuple['RunData', List[int]]], List[str]]:
    """Split runs into (run, latencies) pairs large enough to judge a share, and skip notes."""
    usable, skipped = [], []
    for run in selected:
        latencies = delivered_latencies(run.records())
        if len(latencies) < MIN_SHARE_SAMPLES:
            skipped.append(f"seed {run.seed}: {len(latencies)} arrival(s), too few to judge")
        else:
            usable.append((run, latencies))
    return usable, skipped


def check_mesh_cdf_shape(runs: Sequence['RunData']) -> Verdict:
    """BT mesh single-hop many-to-one: fast share, latency cap and a linear tail."""
    name = 'btmesh single-hop CDF shape'
    selected = _select(runs, 'btmesh', 'full-mesh', 'many-to-one')
    if not selected:
        return _not_applicable(2, name)

    usable, details = _sampled(selected)
    if not usable:
        return Verdict(2, name, None, '; '.join(details))
    passed = True
    for run, latencies in usable:
        records = run.records()
        fast = fraction_at_most(latencies, FAST_SHARE_LIMIT_US)
        worst = max(latencies)
        lo, hi = LINEAR_TAIL_US
        tail = [(lat, frac) for lat, frac in compute_cdf(records) if lo <= lat <= hi]
        r = correlation([p[0] for p in tail], [p[1] for p in tail])
        ok = (FAST_SHARE_RANGE[0] <= fast <= FAST_SHARE_RANGE[1]
              and worst <= MAX_MESH_LATENCY_US
              and not np.isnan(r) and r >= MIN_TAIL_CORRELATION)
        passed = passed and ok
        details.append(f"seed {run.seed}: <=15ms {fast:.3f}, max {worst} us, tail r {r:.3f}")
    return Verdict(2, name, passed, '; '.join(details))


def check_line_cache_effect(runs: Sequence['RunData']) -> Verdict:
    """NDN line one-to-many: most arrivals are served from nearby caches."""
    name = 'ndn line cache effect'
    selected = _select(runs, 'ndn', 'line', 'one-to-many')
    if not selected:
        return _not_applicable(3, name)

    usable, details = _sampled(selected)
    if not usable:
        return Verdict(3, name, None, '; '.join(details))
    passed = True
    for run, latencies in usable:
        share = fraction_at_most(latencies, CACHE_HIT_LATENCY_US)
        passed = passed and share >= MIN_CACHE_HIT_SHARE
        details.append(f"seed {run.seed}: <=1ms {share:.3f}")
    return Verdict(3, name, passed, '; '.join(details))


def _near_retry_multiple(latency: int) -> bool:
    k = round(latency / RETRY_INTERVAL_US)
    return k >= 1 and abs(latency - k * RETRY_INTERVAL_US) <= RETRY_TOLERANCE_US


def check_retry_tail(runs: Sequence['RunData']) -> Verdict:
    """NDN single-hop one-to-many: a small slow tail sitting near retry multiples."""
    name = 'ndn single-hop retry tail'
    selected = _select(runs, 'ndn', 'full-mesh', 'one-to-many')
    if not selected:
        return _not_applicable(4, name)

    usable, details = _sampled(selected)
    if not usable:
        return Verdict(4, name, None, '; '.join(details))
    passed = True
    for run, latencies in usable:
        slow_share = 1.0 - fraction_at_most(latencies, SLOW_LIMIT_US)
        slowest = [lat for lat in latencies if lat > RETRY_SLOW_US]
        aligned = all(_near_retry_multiple(lat) for lat in slowest)
        ok = SLOW_SHARE_RANGE[0] <= slow_share <= SLOW_SHARE_RANGE[1] and aligned
        passed = passed and ok
        details.append(f"seed {run.seed}: >20ms {slow_share:.3f}, "
                       f"{len(slowest)} slow arrival(s) aligned={aligned}")
    return Verdict(4, name, passed, '; '.join(details))


def check_delivery(runs: Sequence['RunData']) -> Verdict:
    name = 'complete delivery'
    if not runs:
        return _not_applicable(5, name)
    failing = []
    for run in runs:
        try:
            rate = success_rate(run.records())
        except MetricsError:
            rate = 0.0
        if rate < 1.0:
            failing.append(f"{run.scenario} seed {run.seed}: {rate:.4f}")
    return Verdict(5, name, not failing, '; '.join(failing) or f"{len(runs)} run(s) at 100%")


def check_comparative_load(runs: Sequence['RunData']) -> Verdict:
    """NDN transmits fewer frames than BT mesh in every cell with both stacks."""
    name = 'comparative traffic load'
    totals: Dict[tuple, Dict[str, List[int]]] = defaultdict(lambda: defaultdict(list))
    for run in runs:
        totals[(run.topology, run.pattern)][run.stack].append(total_tx(run.traffic_records()))

    details, passed, compared = [], True, 0
    for cell, per_stack in sorted(totals.items()):
        if 'ndn' not in per_stack or 'btmesh' not in per_stack:
            continue
        compared += 1
        ndn = float(np.mean(per_stack['ndn']))
        mesh = float(np.mean(per_stack['btmesh']))
        passed = passed and ndn < mesh
        details.append(f"{cell[0]}/{cell[1]}: ndn {ndn:.0f} vs btmesh {mesh:.0f}")

    for run in _select(runs, 'ndn', 'line', 'one-to-many'):
        compared += 1
        traffic = {t.node: t.tx_total for t in run.traffic_records()}
        producer = traffic.get(0, 0)
        busiest_relay = max((tx for node, tx in traffic.items() if node != 0), default=0)
        passed = passed and producer < busiest_relay
        details.append(f"line producer {producer} vs busiest relay {busiest_relay}")

    if not compared:
        return _not_applicable(6, name)
    return Verdict(6, name, passed, '; '.join(details))


def evaluate_acceptance(runs: Sequence['RunData']) -> List[Verdict]:
    """Evaluate every acceptance check that applies to the given runs."""
    verdicts = [
        check_mesh_cdf_shape(runs),
        check_line_cache_effect(runs),
        check_retry_tail(runs),
        check_delivery(runs),
        check_comparative_load(runs),
    ]
    for verdict in verdicts:
        state = {True: 'PASS', False: 'FAIL', None: 'n/a'}[verdict.passed]
        logger.info("Criterion %d (%s): %s %s", verdict.criterion, verdict.name, state,
                    verdict.detail)
    return verdicts
