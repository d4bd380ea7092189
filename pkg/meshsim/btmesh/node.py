"""
BT mesh node: advertising bearer, managed-flooding network layer, access
layer delivery and the friend/LPN roles.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Deque, Dict, List, Optional, Set

import numpy as np

from ..errors import FriendshipError, PayloadTooLargeError, ProtocolError
from ..sim_core import (
    ADVERTISING_CHANNELS,
    MESH_ADV_OVERHEAD,
    MS,
    EventHandle,
    Frame,
    FrameKind,
    RadioMedium,
    SimTime,
    Simulator,
)
from .addresses import MeshAddress
from .friend import (
    DEFAULT_FRIEND_QUEUE_CAPACITY,
    FRIEND_POLL_LENGTH,
    FriendDelivery,
    FriendPoll,
    FriendQueue,
    PollOutcome,
)
from .network import (
    DEFAULT_CACHE_CAPACITY,
    DEFAULT_TTL,
    MAX_ACCESS_PAYLOAD,
    SEQ_LIMIT,
    MessageCache,
    MeshNetworkPdu,
)

logger = logging.getLogger(__name__)

DEFAULT_SCAN_WINDOW_US = 30 * MS


class MeshAction(Enum):
    DELIVERED = 'delivered'
    RELAYED = 'relayed'
    BOTH = 'both'
    DROPPED = 'dropped'


@dataclass
class MeshParams:
    """Bearer, network and friend knobs of a BT mesh node."""

    initial_ttl: int = DEFAULT_TTL
    adv_events: int = 5
    adv_interval_us: int = 20 * MS
    adv_jitter_us: int = 10 * MS
    cache_capacity: int = DEFAULT_CACHE_CAPACITY
    friend_queue_capacity: int = DEFAULT_FRIEND_QUEUE_CAPACITY
    friend_receive_delay_us: int = 10 * MS
    friend_receive_window_us: int = 30 * MS
    relay: bool = True


AccessHandler = Callable[['MeshNode', MeshNetworkPdu], None]


class MeshNode:
    """
    One BT mesh node on the advertising bearer.

    The advertising bearer carries one PDU at a time and holds it for
    adv_events * adv_interval. Locally published PDUs wait only for the PDU
    on air; relayed ones queue behind them. Control records for the friend
    feature go out at once, after any frame already on air.

    Args:
        node: Node id (unicast address is node + 1)
        sim: Simulation engine
        medium: Shared medium
        rng: Advertising jitter stream of this node
        params: Protocol knobs
        scan_window_us: Scanner dwell per channel, None for a fixed channel
        scan_rng: Stream for the scan phase offset
    """

    def __init__(self, node: int, sim: Simulator, medium: RadioMedium,
                 rng: np.random.Generator, params: Optional[MeshParams] = None,
                 scan_window_us: Optional[int] = DEFAULT_SCAN_WINDOW_US,
                 scan_rng: Optional[np.random.Generator] = None):
        self.node = node
        self.sim = sim
        self.medium = medium
        self.rng = rng
        self.params = params or MeshParams()
        self.address = MeshAddress.for_node(node)

        self.subscriptions: Set[MeshAddress] = set()
        self.cache = MessageCache(self.params.cache_capacity)
        self.relay_enabled = self.params.relay
        self.access_handlers: List[AccessHandler] = []
        self.responder: Optional[Callable[[MeshNetworkPdu], bytes]] = None
        self.published: Dict[int, SimTime] = {}

        self.friend: Optional[int] = None
        self.lpns: Dict[int, 'MeshNode'] = {}
        self.friend_queues: Dict[int, FriendQueue] = {}
        self.asleep = False

        self.frames_sent = 0
        self.relayed = 0
        self.delivered = 0

        self.poll_outcome: Optional[PollOutcome] = None
        self._receive_timer: Optional[EventHandle] = None

        self._next_seq = 0
        self._radio_free_at: SimTime = 0
        self._local_queue: Deque[MeshNetworkPdu] = deque()
        self._relay_queue: Deque[MeshNetworkPdu] = deque()
        self._bearer_busy = False

        self.radio = medium.attach(node, self._on_frame, channel=ADVERTISING_CHANNELS[0])
        medium.set_scan_rotation(node, scan_window_us, scan_rng)

    # -- access layer -----------------------------------------------------

    def subscribe(self, address: MeshAddress) -> None:
        self.subscriptions.add(address)

    def accepts(self, dst: MeshAddress) -> bool:
        return dst == self.address or dst in self.subscriptions

    def publish(self, dst: MeshAddress, payload: bytes = b'',
                ack_required: bool = False) -> int:
        """
        Publish payload to dst with the next sequence number.

        Returns:
            Sequence number of the published PDU

        Raises:
            PayloadTooLargeError: Payload needs segmentation
        """
        payload = bytes(payload)
        if len(payload) > MAX_ACCESS_PAYLOAD:
            raise PayloadTooLargeError(
                f"{len(payload)} byte payload exceeds {MAX_ACCESS_PAYLOAD} bytes")
        self._next_seq += 1
        if self._next_seq >= SEQ_LIMIT:
            raise ProtocolError(f"node {self.node} exhausted its sequence space")

        pdu = MeshNetworkPdu(self.address, dst, self.params.initial_ttl, self._next_seq,
                             payload, ack_required)
        self.cache.add(pdu.key)
        self.published[pdu.seq] = self.sim.now
        logger.debug("Node %d publishes seq %d to %s", self.node, pdu.seq, dst)
        self.advertise(pdu, local=True)
        return pdu.seq

    def send_ack_reply(self, original: MeshNetworkPdu, payload: bytes = b'') -> int:
        """Answer an acknowledged message; the reply goes to its source address."""
        if not original.ack_required:
            raise ProtocolError("original message does not request a reply")
        return self.publish(original.src, payload)

    def _deliver(self, pdu: MeshNetworkPdu) -> None:
        self.delivered += 1
        for handler in self.access_handlers:
            handler(self, pdu)
        if pdu.ack_required:
            reply = self.responder(pdu) if self.responder is not None else b''
            self.send_ack_reply(pdu, reply)

    # -- network layer ----------------------------------------------------

    def on_mesh_frame(self, pdu: MeshNetworkPdu) -> MeshAction:
        """
        Network-layer processing of a decoded PDU.

        Known (src, seq) keys are dropped. Otherwise the PDU is queued for
        sleeping LPNs, handed to the access layer when subscribed, and
        relayed with TTL - 1 when relaying is on and TTL >= 2.
        """
        if not self.cache.add(pdu.key):
            return MeshAction.DROPPED

        for lpn in self.lpns.values():
            self.friend_enqueue(lpn, pdu)

        delivered = self.accepts(pdu.dst)
        if delivered:
            self._deliver(pdu)

        relayed = self.relay_enabled and pdu.ttl >= 2 and pdu.src != self.address
        if relayed:
            self.relayed += 1
            self.advertise(pdu.relayed())

        if delivered and relayed:
            return MeshAction.BOTH
        if delivered:
            return MeshAction.DELIVERED
        if relayed:
            return MeshAction.RELAYED
        return MeshAction.DROPPED

    # -- bearer -----------------------------------------------------------

    def advertise(self, pdu: MeshNetworkPdu, local: bool = False) -> None:
        """
        Queue a PDU for the advertising bearer.

        Once the PDU reaches the bearer at time h, event k goes out at
        h + k*adv_interval + U(0, adv_jitter); each event sends one frame on
        each advertising channel back-to-back. Only the first frame of the
        first event counts as an original.
        """
        if len(pdu.payload) > MAX_ACCESS_PAYLOAD:
            raise PayloadTooLargeError("segmentation is not supported")
        if local:
            self._local_queue.append(pdu)
        else:
            self._relay_queue.append(pdu)
        if not self._bearer_busy:
            self._next_bearer_pdu()

    @property
    def bearer_backlog(self) -> int:
        """PDUs waiting for the bearer, not counting the one on air."""
        return len(self._local_queue) + len(self._relay_queue)

    def _next_bearer_pdu(self) -> None:
        queue = self._local_queue or self._relay_queue
        if not queue:
            self._bearer_busy = False
            return
        pdu = queue.popleft()
        self._bearer_busy = True
        params = self.params
        head = self.sim.now
        for k in range(params.adv_events):
            jitter = int(self.rng.integers(0, params.adv_jitter_us + 1)) if params.adv_jitter_us else 0
            self.sim.call_at(head + k * params.adv_interval_us + jitter, self._advertising_event,
                             pdu, pdu.length_bytes, k == 0, label='btmesh.adv_event')
        self.sim.call_at(head + params.adv_events * params.adv_interval_us, self._next_bearer_pdu,
                         label='btmesh.bearer')

    def advertise_once(self, payload: Any, length_bytes: int, at: SimTime) -> None:
        """Single advertising event for a control record."""
        self.sim.call_at(at, self._advertising_event, payload, length_bytes, True,
                         label='btmesh.adv_event')

    def _advertising_event(self, payload: Any, length_bytes: int, original: bool) -> None:
        start = max(self.sim.now, self._radio_free_at)
        for index, channel in enumerate(ADVERTISING_CHANNELS):
            frame = Frame(
                transmitter=self.node,
                channel=channel,
                length_bytes=length_bytes + MESH_ADV_OVERHEAD,
                start=start,
                kind=FrameKind.MESH_ADV,
                payload=payload,
                retransmission=not (original and index == 0),
            )
            self.medium.broadcast_frame(frame)
            start = frame.end
        self._radio_free_at = start
        self.frames_sent += len(ADVERTISING_CHANNELS)

    def _on_frame(self, frame: Frame) -> None:
        payload = frame.payload
        if isinstance(payload, MeshNetworkPdu):
            self.on_mesh_frame(payload)
        elif isinstance(payload, FriendDelivery) and payload.lpn == self.node:
            self._accept_from_friend(payload)
        elif (isinstance(payload, FriendPoll) and payload.friend == self.node
              and payload.lpn in self.lpns):
            self._answer_poll(payload.lpn)

    # -- friend / LPN -----------------------------------------------------

    def sleep(self) -> None:
        self.asleep = True
        self.radio.enabled = False

    def wake(self) -> None:
        self.asleep = False
        self.radio.enabled = True

    def add_lpn(self, lpn: 'MeshNode') -> FriendQueue:
        queue = FriendQueue(self.node, lpn.node, self.params.friend_queue_capacity)
        self.lpns[lpn.node] = lpn
        self.friend_queues[lpn.node] = queue
        return queue

    def friend_enqueue(self, lpn: 'MeshNode', pdu: MeshNetworkPdu) -> bool:
        """
        Queue pdu for a sleeping LPN whose subscriptions match its destination.

        Returns:
            True if the PDU was queued
        """
        queue = self.friend_queues.get(lpn.node)
        if queue is None:
            raise FriendshipError(f"node {self.node} is not the friend of node {lpn.node}")
        if not lpn.asleep or not lpn.accepts(pdu.dst):
            return False
        queue.append(pdu)
        logger.debug("Friend %d queued %s for LPN %d (%d queued)",
                     self.node, pdu.key, lpn.node, len(queue))
        return True

    def serve_poll(self, lpn: int, at: SimTime) -> int:
        """Return every queued PDU to lpn, one advertising event each from `at`."""
        queue = self.friend_queues.get(lpn)
        if queue is None:
            raise FriendshipError(f"node {self.node} is not the friend of node {lpn}")
        entries = queue.drain()
        for index, pdu in enumerate(entries):
            delivery = FriendDelivery(lpn, pdu, more=index < len(entries) - 1)
            self.advertise_once(delivery, delivery.length_bytes,
                                at + index * self.params.adv_interval_us)
        return len(entries)

    def _answer_poll(self, lpn: int) -> None:
        served = self.serve_poll(lpn, self.sim.now + self.params.friend_receive_delay_us)
        outcome = self.lpns[lpn].poll_outcome
        if outcome is not None and not outcome.answered and outcome.closed_at is None:
            outcome.answered = True
            outcome.served = served
        logger.debug("Friend %d heard poll of LPN %d: %d queued", self.node, lpn, served)

    def poll(self) -> PollOutcome:
        """
        Wake up and put a Friend Poll on air.

        The LPN listens from friend_receive_delay after the poll for one
        receive window, extended by every answer that announces more data,
        and goes back to sleep after the last answer or when the window
        closes empty.
        """
        if self.friend is None:
            raise FriendshipError(f"node {self.node} has no friend")
        now = self.sim.now
        self.wake()
        outcome = PollOutcome(self.node, self.friend, now)
        self.poll_outcome = outcome
        self.advertise_once(FriendPoll(self.node, self.friend), FRIEND_POLL_LENGTH, now)
        self._arm_receive_window(now + self.params.friend_receive_delay_us)
        return outcome

    def _arm_receive_window(self, opens: SimTime) -> None:
        self.sim.cancel(self._receive_timer)
        self._receive_timer = self.sim.call_at(opens + self.params.friend_receive_window_us,
                                               self._close_poll, label='btmesh.receive_window')

    def _close_poll(self) -> None:
        self.sim.cancel(self._receive_timer)
        self._receive_timer = None
        if self.poll_outcome is not None:
            self.poll_outcome.closed_at = self.sim.now
            self.poll_outcome = None
        if self.friend is not None:
            self.sleep()

    def _accept_from_friend(self, delivery: FriendDelivery) -> None:
        pdu = delivery.pdu
        outcome = self.poll_outcome
        if outcome is not None and pdu not in outcome.received:
            outcome.received.append(pdu)
        if self.cache.add(pdu.key) and self.accepts(pdu.dst):
            self._deliver(pdu)
        if outcome is None:
            return
        if delivery.more:
            self._arm_receive_window(self.sim.now)
        else:
            self._close_poll()
