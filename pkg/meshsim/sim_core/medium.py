"""
Shared radio medium with per-receiver, per-channel collision resolution.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Deque, Dict, List, NamedTuple, Optional, Protocol, Tuple

import numpy as np

from ..errors import SimulationError
from .engine import Simulator
from .radio import (
    DOT154_CHANNEL,
    Frame,
    FrameKind,
    ScanRotation,
    SimTime,
    TopologyMatrix,
)

logger = logging.getLogger(__name__)

# Own transmissions older than this can no longer overlap a reception.
_TX_HISTORY_US = 20_000


class SleepGate(Protocol):
    """Anything that tells when a radio is powered."""

    def is_awake(self, t: SimTime) -> bool: ...

    def next_wake(self, t: SimTime) -> SimTime: ...


class ReceptionOutcome(Enum):
    DELIVERED = 'delivered'
    COLLIDED = 'collided'
    NOT_LISTENING = 'not-listening'
    LOST = 'lost'


@dataclass
class TrafficTally:
    """Per-node frame counters."""

    tx_original: int = 0
    tx_retransmission: int = 0
    rx: int = 0

    @property
    def tx_total(self) -> int:
        return self.tx_original + self.tx_retransmission


class FrameLogEntry(NamedTuple):
    start: SimTime
    transmitter: int
    dst: Optional[int]
    kind: FrameKind
    retransmission: bool
    channel: int
    length_bytes: int


@dataclass
class Radio:
    """Receiver state of one node (ReceiverState)."""

    node: int
    handler: Callable[[Frame], None]
    rotation: ScanRotation
    sleep: Optional[SleepGate] = None
    enabled: bool = True
    busy_until: SimTime = 0

    def listening_channel(self, t: SimTime) -> Optional[int]:
        if not self.enabled or t < self.busy_until:
            return None
        if self.sleep is not None and not self.sleep.is_awake(t):
            return None
        return self.rotation.channel_at(t)

    def powered_throughout(self, start: SimTime, end: SimTime) -> bool:
        if not self.enabled:
            return False
        if self.sleep is None:
            return True
        return self.sleep.is_awake(start) and self.sleep.is_awake(end - 1)


@dataclass
class Transmission:
    """A frame handed to the medium; outcomes fill in when its airtime ends."""

    frame: Frame
    outcomes: Dict[int, ReceptionOutcome] = field(default_factory=dict)
    complete: bool = False

    def delivered_to(self) -> List[int]:
        return [v for v, o in self.outcomes.items() if o is ReceptionOutcome.DELIVERED]


class _Reception:
    __slots__ = ('tx', 'visible', 'collided')

    def __init__(self, tx: Transmission, visible: bool):
        self.tx = tx
        self.visible = visible
        self.collided = False


class RadioMedium:
    """
    Broadcast medium shared by all radios of one simulation.

    A frame reaches every node visible to its transmitter. Frames from
    transmitters audible at a receiver (visibility, or the optional wider
    interference relation) that overlap in time on the same channel destroy
    each other at that receiver only.

    Args:
        sim: Simulation engine
        topology: Visibility relation (who can decode whom)
        interference: Optional superset relation (who disturbs whom)
        rng: Stream for independent random frame loss
        loss_probability: Per frame kind loss probability (default 0)
        propagation_delay_us: Constant delay added before hand-over to receivers
    """

    def __init__(self, sim: Simulator, topology: TopologyMatrix,
                 interference: Optional[TopologyMatrix] = None,
                 rng: Optional[np.random.Generator] = None,
                 loss_probability: Optional[Dict[FrameKind, float]] = None,
                 propagation_delay_us: int = 0):
        self.sim = sim
        self.topology = topology
        self.interference = topology.union(interference) if interference is not None else topology
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.loss_probability = dict(loss_probability or {})
        self.propagation_delay_us = int(propagation_delay_us)

        self.radios: Dict[int, Radio] = {}
        self.tallies: Dict[int, TrafficTally] = {v: TrafficTally() for v in range(topology.n)}
        self.frame_log: List[FrameLogEntry] = []
        self.delivered_frames = 0

        self._incoming: Dict[int, List[_Reception]] = {v: [] for v in range(topology.n)}
        self._tx_history: Dict[int, Deque[Tuple[SimTime, SimTime]]] = {
            v: deque() for v in range(topology.n)}

    def attach(self, node: int, handler: Callable[[Frame], None],
               rotation: Optional[ScanRotation] = None,
               channel: int = DOT154_CHANNEL,
               sleep: Optional[SleepGate] = None) -> Radio:
        """Register the receive handler of a node; no rotation means a fixed channel."""
        if rotation is None:
            rotation = ScanRotation(window_us=None, fixed_channel=channel)
        radio = Radio(node=node, handler=handler, rotation=rotation, sleep=sleep)
        self.radios[node] = radio
        return radio

    def set_scan_rotation(self, node: int, window_us: Optional[int],
                          rng: Optional[np.random.Generator] = None) -> ScanRotation:
        """
        Cycle the node's scanner 37 -> 38 -> 39 with the given dwell window.

        The phase offset is drawn from rng; window None pins the scanner to
        its fixed channel.
        """
        radio = self.radios[node]
        if window_us is None:
            radio.rotation = ScanRotation(window_us=None, fixed_channel=radio.rotation.fixed_channel)
            return radio.rotation
        if window_us <= 0:
            raise SimulationError("scan window must be positive")
        cycle = window_us * len(radio.rotation.channels)
        phase = int(rng.integers(0, cycle)) if rng is not None else 0
        radio.rotation = ScanRotation(window_us=int(window_us), phase_us=phase,
                                      fixed_channel=radio.rotation.fixed_channel)
        return radio.rotation

    def busy_until(self, node: int) -> SimTime:
        radio = self.radios.get(node)
        return radio.busy_until if radio is not None else 0

    def transmitting(self, node: int, t: SimTime) -> bool:
        return self.busy_until(node) > t

    def channel_busy(self, node: int, channel: int) -> bool:
        """Carrier sense at node: any audible frame on channel, or own transmission."""
        if self.transmitting(node, self.sim.now):
            return True
        return any(r.tx.frame.channel == channel for r in self._incoming[node])

    def broadcast_frame(self, frame: Frame,
                        on_complete: Optional[Callable[[Transmission], None]] = None) -> Transmission:
        """
        Put a frame on the air at frame.start.

        Outcomes per visible receiver are known once the airtime ends; then
        on_complete (if given) runs.
        """
        if frame.start < self.sim.now:
            raise SimulationError(f"frame start {frame.start} us lies in the past")
        tx = Transmission(frame)
        self.sim.call_at(frame.start, self._begin, tx, on_complete, label='medium.begin')
        return tx

    def _begin(self, tx: Transmission, on_complete) -> None:
        frame = tx.frame
        sender = frame.transmitter
        radio = self.radios.get(sender)
        if radio is not None:
            if radio.busy_until > frame.start:
                raise SimulationError(
                    f"node {sender} starts a frame at {frame.start} us while transmitting")
            radio.busy_until = frame.end

        tally = self.tallies[sender]
        if frame.retransmission:
            tally.tx_retransmission += 1
        else:
            tally.tx_original += 1
        self.frame_log.append(FrameLogEntry(frame.start, sender, frame.dst, frame.kind,
                                            frame.retransmission, frame.channel, frame.length_bytes))

        history = self._tx_history[sender]
        history.append((frame.start, frame.end))
        while history and history[0][1] < frame.start - _TX_HISTORY_US:
            history.popleft()

        for v in self.interference.neighbors(sender):
            reception = _Reception(tx, self.topology.visible(sender, v))
            for other in self._incoming[v]:
                if other.tx.frame.channel == frame.channel and other.tx.frame.end > frame.start:
                    other.collided = True
                    reception.collided = True
            self._incoming[v].append(reception)

        self.sim.call_at(frame.end, self._end, tx, on_complete, label='medium.end')

    def _overlaps_own_tx(self, node: int, start: SimTime, end: SimTime) -> bool:
        return any(s < end and e > start for s, e in self._tx_history[node])

    def _end(self, tx: Transmission, on_complete) -> None:
        frame = tx.frame
        deliveries = []
        for v in self.interference.neighbors(frame.transmitter):
            incoming = self._incoming[v]
            reception = next(r for r in incoming if r.tx is tx)
            incoming.remove(reception)
            if not reception.visible:
                continue

            outcome = self._outcome(v, frame, reception)
            tx.outcomes[v] = outcome
            if outcome is ReceptionOutcome.DELIVERED:
                self.tallies[v].rx += 1
                self.delivered_frames += 1
                deliveries.append(v)

        tx.complete = True
        for v in deliveries:
            handler = self.radios[v].handler
            if self.propagation_delay_us:
                self.sim.call_later(self.propagation_delay_us, handler, frame, label='medium.deliver')
            else:
                handler(frame)

        if on_complete is not None:
            on_complete(tx)

    def _outcome(self, v: int, frame: Frame, reception: _Reception) -> ReceptionOutcome:
        radio = self.radios.get(v)
        if (radio is None
                or not radio.powered_throughout(frame.start, frame.end)
                or not radio.rotation.listens_throughout(frame.channel, frame.start, frame.end)
                or self._overlaps_own_tx(v, frame.start, frame.end)):
            return ReceptionOutcome.NOT_LISTENING
        if reception.collided:
            return ReceptionOutcome.COLLIDED
        p = self.loss_probability.get(frame.kind, 0.0)
        if p > 0.0 and self.rng.random() < p:
            return ReceptionOutcome.LOST
        return ReceptionOutcome.DELIVERED

    def traffic(self) -> Dict[int, TrafficTally]:
        return dict(self.tallies)
