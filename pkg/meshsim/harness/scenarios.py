"""
Scenario runners: build one network per run, drive the traffic pattern,
collect arrival and traffic records.

Latency clocks start at the producer's publish for BT mesh and at the
consumer's first Interest for NDN and BT-ICN.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..btmesh import MeshAddress, MeshDelivery, MeshNetwork
from ..bticn import BtIcnNetwork, LpnRequest, SleepSchedule
from ..errors import ConfigError, NoRouteError
from ..ndn import Data, NdnNetwork, RequestHandle, bench_name, bench_prefix
from ..sim_core import SECOND, FrameKind, RadioMedium, SimTime, Simulator
from ..utilities import Stream, format_duration, make_rng
from .config import ScenarioConfig, friendship_pairs
from .metrics import ArrivalRecord, TrafficRecord
from .topology import build_topology, hop_distances, interference_topology, provision_ndn_routes

logger = logging.getLogger(__name__)

HUB = 0
ITEM_GROUP = MeshAddress.group(0)
ITEM_PAYLOAD_BYTES = 8

# added to the last publish time when no duration limit is configured
DEFAULT_SLACK_US = 60 * SECOND


@dataclass
class RunResult:
    config: ScenarioConfig
    arrivals: List[ArrivalRecord]
    traffic: List[TrafficRecord]
    frames_total: int
    frames_delivered: int
    events: int
    end_time_us: SimTime
    digest: str
    partial: bool = False

    @property
    def delivered(self) -> int:
        return sum(1 for r in self.arrivals if r.delivered)


def publish_schedule(cfg: ScenarioConfig, producer: int) -> List[SimTime]:
    """
    Publish instants of one producer: t_k = interval + k*interval + U(-jitter, jitter).
    """
    rng = make_rng(cfg.seed, Stream.PUBLISH, producer)
    interval = cfg.publish_interval_us
    jitter = cfg.publish_jitter_us
    times = []
    for k in range(cfg.items_per_producer):
        offset = int(rng.integers(-jitter, jitter + 1)) if jitter else 0
        times.append(interval + k * interval + offset)
    return times


def _item_payload(seq: int) -> bytes:
    return seq.to_bytes(ITEM_PAYLOAD_BYTES, 'big')


class _Recorder:
    """Arrival bookkeeping keyed by (producer, seq, consumer)."""

    def __init__(self):
        self._entries: Dict[Tuple[int, int, int], List[Optional[SimTime]]] = {}

    def expect(self, producer: int, seq: int, consumer: int, start: SimTime) -> None:
        self._entries.setdefault((producer, seq, consumer), [start, None])

    def start(self, producer: int, seq: int, consumer: int, t: SimTime) -> None:
        self._entries[(producer, seq, consumer)][0] = t

    def arrive(self, producer: int, seq: int, consumer: int, t: SimTime) -> None:
        entry = self._entries.get((producer, seq, consumer))
        if entry is not None and entry[1] is None:
            entry[1] = t

    @property
    def outstanding(self) -> int:
        return sum(1 for _, arrival in self._entries.values() if arrival is None)

    def records(self) -> List[ArrivalRecord]:
        return [ArrivalRecord(p, s, c, start, arrival)
                for (p, s, c), (start, arrival) in sorted(self._entries.items())]


class _Run:
    """Simulator, medium and records shared by every stack of one scenario."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.sim = Simulator()
        self.topology = build_topology(cfg.topology, cfg.nodes)
        radio = cfg.radio
        loss = {
            FrameKind.MESH_ADV: radio.loss_mesh_adv,
            FrameKind.DOT154_DATA: radio.loss_dot154,
            FrameKind.DOT154_ACK: radio.loss_dot154,
        }
        self.medium = RadioMedium(self.sim, self.topology,
                                  interference=interference_topology(cfg.nodes, radio.interference),
                                  rng=make_rng(cfg.seed, Stream.LOSS),
                                  loss_probability=loss,
                                  propagation_delay_us=radio.propagation_delay_us)
        self.recorder = _Recorder()
        if cfg.pattern == 'many-to-one':
            self.producers = [v for v in range(cfg.nodes) if v != HUB]
            self.consumers = [HUB]
        else:
            self.producers = [HUB]
            self.consumers = [v for v in range(cfg.nodes) if v != HUB]
        self.schedules = {p: publish_schedule(cfg, p) for p in self.producers}
        for p, times in self.schedules.items():
            for seq, t in enumerate(times, start=1):
                for c in self.consumers:
                    self.recorder.expect(p, seq, c, t)

    def duration_limit(self) -> SimTime:
        if self.cfg.duration_limit_us is not None:
            return self.cfg.duration_limit_us
        last = max(t for times in self.schedules.values() for t in times)
        slack = DEFAULT_SLACK_US + self.cfg.ndn.interest_lifetime_us
        if self.cfg.stack == 'bticn':
            bticn = self.cfg.bticn
            slack += bticn.max_attempts * bticn.sleep_cycle_us + bticn.long_lived_lifetime_us
        return last + slack

    def finish(self) -> RunResult:
        limit = self.duration_limit()
        events = self.sim.run_until_idle(limit)
        records = self.recorder.records()
        undelivered = self.recorder.outstanding
        partial = undelivered > 0 and self.sim.peek() is not None
        if partial:
            logger.warning("Run %s seed %d hit its duration limit with %d items outstanding",
                           self.cfg.name, self.cfg.seed, undelivered)
        traffic = [TrafficRecord(v, tally.tx_original, tally.tx_retransmission, tally.rx)
                   for v, tally in sorted(self.medium.tallies.items())]
        return RunResult(self.cfg, records, traffic,
                         frames_total=len(self.medium.frame_log),
                         frames_delivered=self.medium.delivered_frames,
                         events=events, end_time_us=self.sim.now,
                         digest=self.sim.trace_digest(), partial=partial)


# -- BT mesh ---------------------------------------------------------------

def _drive_btmesh(run: _Run) -> None:
    cfg = run.cfg
    mesh = MeshNetwork(run.sim, run.medium, cfg.mesh_params(), seed=cfg.seed,
                       scan_window_us=cfg.radio.scan_window_us)
    for c in run.consumers:
        mesh.subscribe(c, ITEM_GROUP)

    items: Dict[Tuple[int, int], int] = {}
    consumers = set(run.consumers)

    def on_delivery(delivery: MeshDelivery) -> None:
        seq = items.get((delivery.src_node, delivery.seq))
        if seq is not None and delivery.node in consumers:
            run.recorder.arrive(delivery.src_node, seq, delivery.node, delivery.time)

    def publish(producer: int, seq: int) -> None:
        item = mesh.publish(producer, ITEM_GROUP, _item_payload(seq))
        items[(producer, item.seq)] = seq
        for c in run.consumers:
            run.recorder.start(producer, seq, c, run.sim.now)

    mesh.listeners.append(on_delivery)
    for p in run.producers:
        for seq, t in enumerate(run.schedules[p], start=1):
            run.sim.call_at(t, publish, p, seq, label='harness.publish')


# -- NDN and BT-ICN -----------------------------------------------------------

class _NdnDriver:
    """
    Producers publish into their repositories; consumers request items.

    Many-to-one: the hub requests each producer's items in order, at most one
    outstanding Interest per producer. One-to-many: every consumer requests
    each item after its publish time, farther consumers first by
    request_lead_per_hop_us per hop of difference, plus a uniform jitter of
    up to request_jitter_us. A consumer's latency clock starts when its first
    Interest goes on air; CS hits and aggregated requests keep the request time.
    """

    def __init__(self, run: _Run):
        self.run = run
        cfg = run.cfg
        self.sim = run.sim
        self.ndn = NdnNetwork(run.sim, run.medium, cfg.ndn_params(), seed=cfg.seed,
                              csma=cfg.csma_params())
        self.bticn: Optional[BtIcnNetwork] = None
        self.friends: Dict[int, int] = {}
        if cfg.stack == 'bticn':
            self.bticn = BtIcnNetwork(self.ndn)
            self.friends = {lpn: friend for friend, lpn in friendship_pairs(cfg)}

        self._outstanding: Dict[int, bool] = {p: False for p in run.producers}
        self._backlog: Dict[int, List[int]] = {p: [] for p in run.producers}

    def setup(self) -> None:
        run, cfg = self.run, self.run.cfg
        via = {p: self.friends[p] for p in run.producers if p in self.friends}
        provision_ndn_routes(self.ndn, run.producers, via)
        for p in run.producers:
            self.ndn.register_producer(p, bench_prefix(p))
        if self.bticn is not None:
            self._establish_friendships()

        for p in run.producers:
            for seq, t in enumerate(run.schedules[p], start=1):
                self.sim.call_at(t, self._produce, p, seq, label='harness.produce')
        if cfg.pattern == 'many-to-one':
            for p in run.producers:
                for seq, t in enumerate(run.schedules[p], start=1):
                    self.sim.call_at(t, self._due, p, seq, label='harness.due')
        else:
            for p in run.producers:
                self._schedule_requests(p)

    def _schedule_requests(self, producer: int) -> None:
        run, ndn_cfg = self.run, self.run.cfg.ndn
        distances = hop_distances(run.topology, producer)
        farthest = max(distances.values())
        for c in run.consumers:
            lead = (farthest - distances.get(c, farthest)) * ndn_cfg.request_lead_per_hop_us
            rng = make_rng(run.cfg.seed, Stream.REQUEST_JITTER, c, producer)
            for seq, t in enumerate(run.schedules[producer], start=1):
                at = t + lead + int(rng.integers(0, ndn_cfg.request_jitter_us + 1))
                self.sim.call_at(at, self._request, c, producer, seq, label='harness.request')

    def _establish_friendships(self) -> None:
        cfg = self.run.cfg
        bticn_cfg = cfg.bticn
        for lpn, friend in sorted(self.friends.items()):
            rng = make_rng(cfg.seed, Stream.SLEEP_PHASE, lpn)
            phase = int(rng.integers(0, bticn_cfg.sleep_cycle_us))
            schedule = SleepSchedule(bticn_cfg.sleep_cycle_us, bticn_cfg.awake_window_us, phase)
            self.bticn.establish_friendship(friend, lpn, schedule)
            if lpn in self.run.producers:
                self.bticn.friend_subscribe(friend, lpn, bench_prefix(lpn),
                                            bticn_cfg.long_lived_lifetime_us)

    def _produce(self, producer: int, seq: int) -> None:
        data = Data(bench_name(producer, seq), _item_payload(seq))
        if self.bticn is not None and producer in self.friends:
            self.bticn.lpn_publish(producer, data.name, data.payload)
        else:
            self.ndn.put_data(producer, data)

    def _due(self, producer: int, seq: int) -> None:
        if self._outstanding[producer]:
            self._backlog[producer].append(seq)
            return
        self._request(self.run.consumers[0], producer, seq)

    def _request(self, consumer: int, producer: int, seq: int) -> None:
        recorder = self.run.recorder
        name = bench_name(producer, seq)
        recorder.start(producer, seq, consumer, self.sim.now)

        if self.bticn is not None and consumer in self.friends:
            def on_lpn(request: LpnRequest) -> None:
                if request.satisfied:
                    recorder.arrive(producer, seq, consumer, request.completed_at)
                self._finished(producer)

            cfg = self.run.cfg.bticn
            self.bticn.lpn_request(consumer, name, repeat_after_us=cfg.repeat_after_us,
                                   max_attempts=cfg.max_attempts, on_complete=on_lpn)
            self._mark_outstanding(producer)
            return

        def on_complete(handle: RequestHandle) -> None:
            recorder.start(producer, seq, consumer, handle.clock_start)
            if handle.satisfied:
                recorder.arrive(producer, seq, consumer, handle.completed_at)
            self._finished(producer)

        lifetime = None
        if self.bticn is not None and producer in self.friends:
            lifetime = self.run.cfg.bticn.long_lived_lifetime_us
        self._mark_outstanding(producer)
        try:
            self.ndn.express_interest(consumer, name, on_complete=on_complete,
                                      lifetime_us=lifetime)
        except NoRouteError as e:
            logger.warning("Request for %s at node %d failed: %s", name, consumer, e)
            self._finished(producer)

    def _mark_outstanding(self, producer: int) -> None:
        if self.run.cfg.pattern == 'many-to-one':
            self._outstanding[producer] = True

    def _finished(self, producer: int) -> None:
        if self.run.cfg.pattern != 'many-to-one':
            return
        self._outstanding[producer] = False
        backlog = self._backlog[producer]
        if backlog:
            self.sim.call_later(0, self._request, self.run.consumers[0], producer,
                                backlog.pop(0), label='harness.request')
            self._outstanding[producer] = True


# -- entry points ------------------------------------------------------------

def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """Build and run one scenario; dispatch on the traffic pattern."""
    if cfg.pattern == 'many-to-one':
        return run_many_to_one(cfg)
    return run_one_to_many(cfg)


def run_many_to_one(cfg: ScenarioConfig) -> RunResult:
    """
    Every non-hub node produces items_per_producer items for the hub (node 0).

    Raises:
        ConfigError: cfg.pattern is not many-to-one
    """
    if cfg.pattern != 'many-to-one':
        raise ConfigError(f"scenario {cfg.name} is {cfg.pattern}, not many-to-one")
    return _execute(cfg)


def run_one_to_many(cfg: ScenarioConfig) -> RunResult:
    """
    The hub (node 0) produces items for every other node.

    Raises:
        ConfigError: cfg.pattern is not one-to-many
    """
    if cfg.pattern != 'one-to-many':
        raise ConfigError(f"scenario {cfg.name} is {cfg.pattern}, not one-to-many")
    return _execute(cfg)


def _execute(cfg: ScenarioConfig) -> RunResult:
    run = _Run(cfg)
    logger.info("Running %s (seed %d): %d producer(s), %d consumer(s)",
                cfg.name, cfg.seed, len(run.producers), len(run.consumers))
    if cfg.stack == 'btmesh':
        _drive_btmesh(run)
    else:
        _NdnDriver(run).setup()
    result = run.finish()
    logger.info("Finished %s (seed %d) at %s: %d/%d delivered, %d frames",
                cfg.name, cfg.seed, format_duration(result.end_time_us),
                result.delivered, len(result.arrivals), result.frames_total)
    return result


def check_conservation(result: RunResult) -> Sequence[str]:
    """Violations of traffic conservation against the frame log; empty when sound."""
    problems = []
    tx = sum(t.tx_total for t in result.traffic)
    rx = sum(t.rx for t in result.traffic)
    if tx != result.frames_total:
        problems.append(f"tx total {tx} != frame log length {result.frames_total}")
    if rx != result.frames_delivered:
        problems.append(f"rx total {rx} != delivered frames {result.frames_delivered}")
    return problems
