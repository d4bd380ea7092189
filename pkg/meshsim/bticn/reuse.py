"""
Second-retrieval comparison: BT-ICN friend cache vs. BT mesh friend queue.

Fixture: producer P - relay R - friend F, with two LPNs L1 and L2 hanging off
F. L1 retrieves an item first; afterwards L2 asks for the same item. Frames
sent by or addressed to P and R from then on are upstream traffic.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from ..btmesh import MeshAddress, MeshNetwork, MeshParams
from ..ndn import Data, NdnNetwork, NdnParams, bench_name, bench_prefix
from ..sim_core import MS, SECOND, FrameLogEntry, RadioMedium, SimTime, Simulator, TopologyMatrix
from .friend import BtIcnNetwork, LpnRequest
from .sleep import SleepSchedule

logger = logging.getLogger(__name__)

PRODUCER, RELAY, FRIEND, LPN_1, LPN_2 = range(5)
UPSTREAM = frozenset({PRODUCER, RELAY})

ITEM_PAYLOAD = b'item-1'
GET_PAYLOAD = b'get'


def reuse_topology() -> TopologyMatrix:
    return TopologyMatrix(5, [(PRODUCER, RELAY), (RELAY, FRIEND), (FRIEND, LPN_1), (FRIEND, LPN_2)])


@dataclass
class ReuseConfig:
    """
    Fixture timing. The producer answers slower than an LPN stays awake, so
    the first LPN request always misses and is served from the friend later.
    """

    seed: int = 1
    cycle_us: SimTime = 1 * SECOND
    awake_us: SimTime = 20 * MS
    producer_delay_us: SimTime = 50 * MS
    scan_window_us: Optional[SimTime] = 30 * MS


@dataclass
class ReuseComparison:
    ndn_upstream_frames: int
    btmesh_upstream_frames: int
    ndn_first: LpnRequest
    ndn_second: LpnRequest
    btmesh_first_polled: int
    btmesh_second_polled: int
    btmesh_refetched: int


def upstream_frames(frame_log: Iterable[FrameLogEntry], since: SimTime) -> int:
    return sum(1 for entry in frame_log
               if entry.start >= since and (entry.transmitter in UPSTREAM or entry.dst in UPSTREAM))


def _ndn_run(cfg: ReuseConfig):
    sim = Simulator()
    medium = RadioMedium(sim, reuse_topology())
    ndn = NdnNetwork(sim, medium, NdnParams(producer_delay_us=cfg.producer_delay_us), seed=cfg.seed)
    bticn = BtIcnNetwork(ndn)

    prefix = bench_prefix(PRODUCER)
    name = bench_name(PRODUCER, 1)
    ndn.add_route(RELAY, prefix, PRODUCER)
    ndn.add_route(FRIEND, prefix, RELAY)
    ndn.register_producer(PRODUCER, prefix)
    ndn.put_data(PRODUCER, Data(name, ITEM_PAYLOAD))

    schedule = SleepSchedule(cfg.cycle_us, cfg.awake_us)
    bticn.establish_friendship(FRIEND, LPN_1, schedule)
    bticn.establish_friendship(FRIEND, LPN_2, schedule)

    first = bticn.lpn_request(LPN_1, name)
    sim.run(4 * cfg.cycle_us)

    second_at = sim.now
    second = bticn.lpn_request(LPN_2, name)
    sim.run(second_at + 4 * cfg.cycle_us)
    return upstream_frames(medium.frame_log, second_at), first, second


def _btmesh_run(cfg: ReuseConfig):
    sim = Simulator()
    medium = RadioMedium(sim, reuse_topology())
    mesh = MeshNetwork(sim, medium, MeshParams(), seed=cfg.seed, scan_window_us=cfg.scan_window_us)
    group = MeshAddress.group(0)
    mesh.node(PRODUCER).responder = lambda pdu: ITEM_PAYLOAD

    mesh.subscribe(LPN_1, group)
    mesh.establish_friendship(FRIEND, LPN_1)
    mesh.publish(PRODUCER, group, ITEM_PAYLOAD)
    sim.run(cfg.cycle_us)
    first = mesh.lpn_poll(LPN_1)
    sim.run(2 * cfg.cycle_us)

    # L2 joins after the item left the friend queue; the queue cannot serve it again
    joined_at = sim.now
    mesh.subscribe(LPN_2, group)
    mesh.establish_friendship(FRIEND, LPN_2)
    second = mesh.lpn_poll(LPN_2)
    mesh.publish(LPN_2, mesh.node(PRODUCER).address, GET_PAYLOAD, ack_required=True)
    sim.run(joined_at + cfg.cycle_us)
    refetch = mesh.lpn_poll(LPN_2)
    sim.run(joined_at + 2 * cfg.cycle_us)
    return (upstream_frames(medium.frame_log, joined_at), first.received_count,
            second.received_count, refetch.received_count)


def reuse_comparison(cfg: Optional[ReuseConfig] = None) -> ReuseComparison:
    """Count upstream frames caused by a second LPN retrieving an already retrieved item."""
    cfg = cfg or ReuseConfig()
    ndn_upstream, first, second = _ndn_run(cfg)
    mesh_upstream, first_polled, second_polled, refetched = _btmesh_run(cfg)
    logger.info("Re-use comparison: NDN %d upstream frames, BT mesh %d",
                ndn_upstream, mesh_upstream)
    return ReuseComparison(ndn_upstream, mesh_upstream, first, second,
                           first_polled, second_polled, refetched)
