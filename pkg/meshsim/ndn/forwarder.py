"""
NDN forwarder: one per node, speaking Interest/Data over CSMA/ARQ faces.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import NoRouteError
from ..sim_core import SECOND, CsmaMac, Simulator, SimTime
from .packets import DEFAULT_INTEREST_LIFETIME_US, Data, Interest, Name
from .tables import (
    DEFAULT_CS_CAPACITY,
    ContentStore,
    Face,
    FaceKind,
    Fib,
    FibEntry,
    Pit,
    PitEntry,
    RequestHandle,
    RequestStatus,
)

logger = logging.getLogger(__name__)

Packet = Union[Interest, Data]
Producer = Callable[[Interest], Optional[Data]]

APP_FACE_ID = 0
BROADCAST_FACE_ID = 1


class InterestAction(Enum):
    DATA_RETURNED = 'data-returned'
    FORWARDED = 'forwarded'
    AGGREGATED = 'aggregated'
    DROPPED = 'dropped'


class TimerOutcome(Enum):
    RETRANSMITTED = 'retransmitted'
    EXPIRED = 'expired'


@dataclass
class NdnParams:
    """Forwarding knobs. Relays retransmit only when relay_retransmit is set."""

    retry_interval_us: int = 1 * SECOND
    max_retries: int = 4
    interest_lifetime_us: int = DEFAULT_INTEREST_LIFETIME_US
    cs_capacity: int = DEFAULT_CS_CAPACITY
    relay_retransmit: bool = False
    producer_delay_us: int = 0
    cs_hit_delay_us: int = 100
    broadcast_face: bool = False
    min_pit_lifetime_us: int = 0


class NdnNode:
    """
    Forwarder with FIB, PIT and content store.

    Args:
        node: Node id
        sim: Simulation engine
        mac: CSMA/ARQ link of this node
        rng: Nonce stream of this node
        params: Forwarding knobs
    """

    def __init__(self, node: int, sim: Simulator, mac: CsmaMac,
                 rng: np.random.Generator, params: Optional[NdnParams] = None):
        self.node = node
        self.sim = sim
        self.mac = mac
        self.rng = rng
        self.params = params or NdnParams()

        self.fib = Fib()
        self.pit = Pit()
        self.cs = ContentStore(self.params.cs_capacity)

        self.app_face = Face(APP_FACE_ID, FaceKind.APP)
        self.broadcast_face: Optional[Face] = (
            Face(BROADCAST_FACE_ID, FaceKind.BROADCAST) if self.params.broadcast_face else None)
        self._neighbor_faces: Dict[int, Face] = {}
        self._next_face_id = BROADCAST_FACE_ID + 1

        self.producers: List[Tuple[Name, Producer]] = []
        self.repository: Dict[Name, Data] = {}
        self.unsolicited_data = 0
        self.min_pit_lifetime_us = self.params.min_pit_lifetime_us

        mac.receive_handler = self._on_receive

    # -- faces and routes -------------------------------------------------

    def add_neighbor(self, neighbor: int) -> Face:
        face = self._neighbor_faces.get(neighbor)
        if face is None:
            face = Face(self._next_face_id, FaceKind.UNICAST, neighbor)
            self._next_face_id += 1
            self._neighbor_faces[neighbor] = face
        return face

    def face_to(self, neighbor: int) -> Face:
        return self._neighbor_faces[neighbor]

    @property
    def faces(self) -> List[Face]:
        faces = [self.app_face]
        if self.broadcast_face is not None:
            faces.append(self.broadcast_face)
        return faces + list(self._neighbor_faces.values())

    def add_route(self, prefix: Name, face: Face) -> FibEntry:
        return self.fib.add_route(prefix, face)

    def fib_lookup(self, name: Name) -> Optional[FibEntry]:
        return self.fib.lookup(name)

    # -- consumer side ----------------------------------------------------

    def express_interest(self, name: Name,
                         on_complete: Optional[Callable[[RequestHandle], None]] = None,
                         lifetime_us: Optional[int] = None,
                         max_retries: Optional[int] = None) -> RequestHandle:
        """
        Request `name` for a local application.

        A content store hit completes after cs_hit_delay_us; a pending entry
        for the name absorbs the request; otherwise a PIT entry is created,
        the Interest goes out on the FIB faces and the retry timer is armed.

        Raises:
            NoRouteError: Neither a cached copy nor a FIB route exists
        """
        now = self.sim.now
        handle = RequestHandle(self.node, name, now, on_complete=on_complete)

        data = self.cs.lookup(name)
        if data is not None:
            handle.from_local_cache = True
            self.sim.call_later(self.params.cs_hit_delay_us, self._complete_from_cache,
                                handle, data, label='ndn.cs_hit')
            return handle

        entry = self.pit.get(name)
        if entry is not None:
            entry.local_requests.append(handle)
            if entry.add_face(self.app_face):
                return handle
            # another local request is already waiting: re-express upstream
            fib_entry = self.fib.lookup(name)
            if fib_entry is not None:
                interest = replace(entry.interest, nonce=self._nonce())
                entry.interest = interest
                entry.nonces.add(interest.nonce)
                self._forward(interest, fib_entry, exclude=None, retransmission=True, entry=entry)
            return handle

        fib_entry = self.fib.lookup(name)
        if fib_entry is None:
            handle.finish(RequestStatus.UNROUTABLE, now)
            raise NoRouteError(f"node {self.node} has no route for {name}")

        lifetime = lifetime_us if lifetime_us is not None else self.params.interest_lifetime_us
        interest = Interest(name, self._nonce(), lifetime)
        entry = PitEntry(name, now, lifetime, interest,
                         max_retries=self.params.max_retries if max_retries is None else max_retries)
        entry.add_face(self.app_face)
        entry.nonces.add(interest.nonce)
        entry.local_requests.append(handle)
        self.pit.insert(entry)

        self._forward(interest, fib_entry, exclude=None, retransmission=False, entry=entry)
        self._arm_timers(entry)
        return handle

    def _complete_from_cache(self, handle: RequestHandle, data: Data) -> None:
        handle.finish(RequestStatus.SATISFIED, self.sim.now, data)

    # -- forwarding -------------------------------------------------------

    def on_interest(self, interest: Interest, in_face: Face) -> InterestAction:
        """
        Process an Interest that arrived on in_face.

        Order: content store, then PIT (duplicate nonce, aggregation of a new
        face, re-forwarding of a retransmission on a known face), then FIB.
        """
        name = interest.name
        data = self.cs.lookup(name)
        if data is not None:
            self._send(in_face, data)
            return InterestAction.DATA_RETURNED

        # a friend keeps its LPNs' Interests alive upstream for its own PIT lifetime
        if interest.lifetime_us < self.min_pit_lifetime_us:
            interest = replace(interest, lifetime_us=self.min_pit_lifetime_us)

        entry = self.pit.get(name)
        if entry is not None:
            if interest.nonce in entry.nonces:
                logger.debug("Node %d: duplicate nonce for %s dropped", self.node, name)
                return InterestAction.DROPPED
            entry.nonces.add(interest.nonce)
            if entry.add_face(in_face):
                return InterestAction.AGGREGATED
            fib_entry = self.fib.lookup(name)
            if fib_entry is None:
                return InterestAction.DROPPED
            entry.interest = interest
            self._forward(interest, fib_entry, exclude=in_face, retransmission=True)
            return InterestAction.FORWARDED

        fib_entry = self.fib.lookup(name)
        if fib_entry is None or not self._out_faces(fib_entry, in_face):
            logger.debug("Node %d: no route for %s", self.node, name)
            return InterestAction.DROPPED

        lifetime = interest.lifetime_us
        entry = PitEntry(name, self.sim.now, lifetime, interest,
                         max_retries=self.params.max_retries if self.params.relay_retransmit else 0)
        entry.add_face(in_face)
        entry.nonces.add(interest.nonce)
        self.pit.insert(entry)
        self._forward(interest, fib_entry, exclude=in_face, retransmission=False)
        self._arm_timers(entry)
        return InterestAction.FORWARDED

    def on_data(self, data: Data, in_face: Face) -> int:
        """
        Satisfy the PIT entry for data.name.

        Returns:
            Number of faces the Data went to (local applications count as one)
        """
        entry = self.pit.remove(data.name)
        if entry is None:
            self.unsolicited_data += 1
            logger.debug("Node %d: unsolicited Data %s dropped", self.node, data.name)
            return 0
        self._cancel_timers(entry)
        self.cs.insert(data)

        count = 0
        for face in entry.incoming_faces:
            if face.kind is FaceKind.APP or face == in_face:
                continue
            self._send(face, data)
            count += 1
        if entry.local_requests:
            count += 1
            for handle in entry.local_requests:
                handle.finish(RequestStatus.SATISFIED, self.sim.now, data)
        return count

    def pit_timer_fire(self, entry: PitEntry) -> TimerOutcome:
        """
        Retry or expire a pending entry.

        Retransmits (new nonce) while retries remain and the entry is younger
        than its lifetime; otherwise removes it and times out local requests.
        """
        now = self.sim.now
        if self.pit.get(entry.name) is not entry:
            return TimerOutcome.EXPIRED

        age = now - entry.created
        fib_entry = self.fib.lookup(entry.name)
        if (entry.retransmit_count < entry.max_retries and age < entry.lifetime_us
                and fib_entry is not None):
            entry.retransmit_count += 1
            interest = replace(entry.interest, nonce=self._nonce())
            entry.interest = interest
            entry.nonces.add(interest.nonce)
            logger.debug("Node %d: retransmission %d for %s",
                         self.node, entry.retransmit_count, entry.name)
            self._forward(interest, fib_entry, exclude=None, retransmission=True, entry=entry)
            entry.retry_timer = None
            self._arm_retry(entry)
            return TimerOutcome.RETRANSMITTED

        self.pit.remove(entry.name)
        self._cancel_timers(entry)
        logger.debug("Node %d: PIT entry %s expired", self.node, entry.name)
        for handle in entry.local_requests:
            handle.finish(RequestStatus.TIMED_OUT, now)
        return TimerOutcome.EXPIRED

    def _arm_timers(self, entry: PitEntry) -> None:
        entry.expiry_timer = self.sim.call_at(entry.expires_at, self.pit_timer_fire, entry,
                                              label='ndn.pit_expiry')
        self._arm_retry(entry)

    def _arm_retry(self, entry: PitEntry) -> None:
        at = self.sim.now + self.params.retry_interval_us
        if entry.retransmit_count < entry.max_retries and at < entry.expires_at:
            entry.retry_timer = self.sim.call_at(at, self.pit_timer_fire, entry,
                                                 label='ndn.pit_retry')

    def _cancel_timers(self, entry: PitEntry) -> None:
        self.sim.cancel(entry.retry_timer)
        self.sim.cancel(entry.expiry_timer)
        entry.retry_timer = None
        entry.expiry_timer = None

    def _out_faces(self, fib_entry: FibEntry, exclude: Optional[Face]) -> List[Face]:
        # a broadcast face may carry the Interest onward on the face it came in
        return [face for face in fib_entry.faces
                if face != exclude or face.kind is FaceKind.BROADCAST]

    def _forward(self, interest: Interest, fib_entry: FibEntry, exclude: Optional[Face],
                 retransmission: bool, entry: Optional[PitEntry] = None) -> int:
        """Send interest on the FIB faces; entry gets its local requests stamped on air."""
        on_air = entry.note_transmission if entry is not None and entry.local_requests else None
        faces = self._out_faces(fib_entry, exclude)
        for face in faces:
            self._send(face, interest, retransmission, on_air)
        return len(faces)

    def _send(self, face: Face, packet: Packet, retransmission: bool = False,
              on_air: Optional[Callable[[SimTime], None]] = None) -> None:
        if face.kind is FaceKind.APP:
            if isinstance(packet, Interest):
                self._to_producer(packet)
            return
        dst = face.neighbor if face.kind is FaceKind.UNICAST else None
        self.mac.send(dst, packet, packet.size, net_retransmission=retransmission, on_air=on_air)

    def _on_receive(self, src: int, packet: Packet, dst: Optional[int]) -> None:
        if dst is None and self.broadcast_face is not None:
            face = self.broadcast_face
        else:
            face = self._neighbor_faces.get(src)
        if face is None:
            return
        if isinstance(packet, Interest):
            self.on_interest(packet, face)
        elif isinstance(packet, Data):
            self.on_data(packet, face)

    def _nonce(self) -> int:
        return int(self.rng.integers(0, 1 << 32))

    # -- producer side ----------------------------------------------------

    def register_producer(self, prefix: Name, app: Optional[Producer] = None) -> None:
        """
        Serve Interests under prefix from a local application.

        The default application answers from the node's repository (see
        put_data) after producer_delay_us.
        """
        self.producers.append((prefix, app or self._serve_repository))
        self.producers.sort(key=lambda item: len(item[0]), reverse=True)
        self.fib.add_route(prefix, self.app_face)

    def put_data(self, data: Data) -> bool:
        """
        Make data available at this producer.

        Returns:
            True if a pending Interest was satisfied right away
        """
        self.repository[data.name] = data
        if data.name in self.pit:
            return self.on_data(data, self.app_face) > 0
        return False

    def _serve_repository(self, interest: Interest) -> Optional[Data]:
        return self.repository.get(interest.name)

    def _to_producer(self, interest: Interest) -> None:
        for prefix, app in self.producers:
            if prefix.is_prefix_of(interest.name):
                self.sim.call_later(self.params.producer_delay_us, self._run_producer,
                                    app, interest, label='ndn.producer')
                return

    def _run_producer(self, app: Producer, interest: Interest) -> None:
        data = app(interest)
        if data is not None and data.name in self.pit:
            self.on_data(data, self.app_face)
