"""
IEEE 802.15.4-style unslotted CSMA/CA with link-layer acknowledgments (ARQ).
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Deque, Dict, Optional

import numpy as np

from .engine import EventHandle, Simulator
from .medium import RadioMedium, SleepGate, Transmission
from .radio import (
    DOT154_ACK_LENGTH,
    DOT154_CHANNEL,
    DOT154_OVERHEAD,
    Frame,
    FrameKind,
    SimTime,
)

logger = logging.getLogger(__name__)


def _awake_throughout(gate: Optional[SleepGate], start: SimTime, end: SimTime) -> bool:
    return gate is None or (gate.is_awake(start) and gate.is_awake(end - 1))


class SendResult(Enum):
    ACKED = 'acked'
    FAILED = 'failed'
    SENT = 'sent'  # broadcast, no acknowledgment expected


@dataclass
class CsmaParams:
    """MAC constants (802.15.4 defaults)."""

    slot_us: int = 320
    min_be: int = 3
    max_be: int = 5
    max_csma_backoffs: int = 4
    max_retries: int = 4
    ack_timeout_us: int = 864
    cca_us: int = 128
    turnaround_us: int = 192


@dataclass
class _Pending:
    dst: Optional[int]
    payload: Any
    payload_length: int
    on_done: Optional[Callable[[SendResult], None]]
    net_retransmission: bool
    seq: int
    on_air: Optional[Callable[[SimTime], None]] = None
    attempt: int = 0
    nb: int = 0
    be: int = 0


class CsmaMac:
    """
    Per-node MAC entity. Frames are sent one at a time from a FIFO queue.

    Unicast frames are acknowledged; a missing ack triggers up to
    max_retries retransmissions. Broadcast frames (dst None) are sent once.

    Args:
        node: Node id
        sim: Simulation engine
        medium: Shared medium
        rng: Backoff stream of this node
        params: MAC constants
        channel: Operating channel
    """

    def __init__(self, node: int, sim: Simulator, medium: RadioMedium,
                 rng: np.random.Generator, params: Optional[CsmaParams] = None,
                 channel: int = DOT154_CHANNEL):
        self.node = node
        self.sim = sim
        self.medium = medium
        self.rng = rng
        self.params = params or CsmaParams()
        self.channel = channel

        self.receive_handler: Optional[Callable[[int, Any, Optional[int]], None]] = None
        self.sleep: Optional[SleepGate] = None
        self.peer_sleep: Dict[int, SleepGate] = {}

        self._queue: Deque[_Pending] = deque()
        self._current: Optional[_Pending] = None
        self._ack_timer: Optional[EventHandle] = None
        self._radio_free_at: SimTime = 0
        self._next_seq = 0
        self._last_seq_from: Dict[int, int] = {}

        self.radio = medium.attach(node, self._on_frame, channel=channel)

    def set_sleep(self, sleep: Optional[SleepGate]) -> None:
        """Gate this node's radio with a sleep schedule."""
        self.sleep = sleep
        self.radio.sleep = sleep

    def send(self, dst: Optional[int], payload: Any, payload_length: int,
             on_done: Optional[Callable[[SendResult], None]] = None,
             net_retransmission: bool = False,
             on_air: Optional[Callable[[SimTime], None]] = None) -> None:
        """
        Queue a frame for dst (None = broadcast).

        A frame for a sleeping peer is dropped before any airtime is spent
        and reported as FAILED. on_air gets the start time of every attempt
        that reaches the air.
        """
        peer = self.peer_sleep.get(dst) if dst is not None else None
        if peer is not None and not peer.is_awake(self.sim.now):
            logger.debug("Node %d: peer %s asleep, frame dropped", self.node, dst)
            if on_done is not None:
                on_done(SendResult.FAILED)
            return

        self._next_seq = (self._next_seq + 1) & 0xFF
        self._queue.append(_Pending(dst, payload, payload_length, on_done,
                                    net_retransmission, self._next_seq, on_air))
        if self._current is None:
            self._start_next()

    def csma_unicast(self, dst: int, payload: Any, payload_length: int,
                     on_done: Optional[Callable[[SendResult], None]] = None) -> None:
        self.send(dst, payload, payload_length, on_done)

    @property
    def queue_length(self) -> int:
        return len(self._queue) + (1 if self._current is not None else 0)

    def _start_next(self) -> None:
        if not self._queue:
            self._current = None
            return
        self._current = self._queue.popleft()
        self._start_attempt()

    def _start_attempt(self) -> None:
        pending = self._current
        pending.nb = 0
        pending.be = self.params.min_be
        self._backoff()

    def _backoff(self) -> None:
        pending = self._current
        slots = int(self.rng.integers(0, 2 ** pending.be))
        delay = slots * self.params.slot_us + self.params.cca_us
        self.sim.call_later(delay, self._clear_channel_assessment, label='csma.cca')

    def _clear_channel_assessment(self) -> None:
        pending = self._current
        now = self.sim.now

        if self.sleep is not None and not self.sleep.is_awake(now):
            wake = self.sleep.next_wake(now)
            self.sim.call_at(wake, self._backoff, label='csma.wake')
            return

        busy = self.medium.channel_busy(self.node, self.channel) or self._radio_free_at > now
        if busy:
            pending.nb += 1
            pending.be = min(pending.be + 1, self.params.max_be)
            if pending.nb > self.params.max_csma_backoffs:
                logger.debug("Node %d: channel access failure", self.node)
                self._attempt_failed()
            else:
                self._backoff()
            return

        frame = Frame(
            transmitter=self.node,
            channel=self.channel,
            length_bytes=pending.payload_length + DOT154_OVERHEAD,
            start=now + self.params.turnaround_us,
            kind=FrameKind.DOT154_DATA,
            payload=pending.payload,
            dst=pending.dst,
            retransmission=pending.attempt > 0 or pending.net_retransmission,
            seq=pending.seq,
        )
        # the frame starts after the turnaround and must end before the radio sleeps
        if not _awake_throughout(self.sleep, frame.start, frame.end):
            self.sim.call_at(self.sleep.next_wake(frame.end), self._backoff, label='csma.wake')
            return
        if pending.dst is not None:
            if not _awake_throughout(self.peer_sleep.get(pending.dst), frame.start, frame.end):
                self._finish(SendResult.FAILED)
                return

        self._radio_free_at = frame.end
        self.medium.broadcast_frame(frame, self._on_data_sent)
        if pending.on_air is not None:
            pending.on_air(frame.start)

    def _on_data_sent(self, tx: Transmission) -> None:
        pending = self._current
        if pending.dst is None:
            self._finish(SendResult.SENT)
            return
        self._ack_timer = self.sim.call_later(self.params.ack_timeout_us, self._on_ack_timeout,
                                              label='csma.ack_timeout')

    def _on_ack_timeout(self) -> None:
        self._ack_timer = None
        self._attempt_failed()

    def _attempt_failed(self) -> None:
        pending = self._current
        pending.attempt += 1
        if pending.attempt > self.params.max_retries:
            logger.debug("Node %d: frame to %s failed after %d attempts",
                         self.node, pending.dst, pending.attempt)
            self._finish(SendResult.FAILED)
        else:
            self._start_attempt()

    def _finish(self, result: SendResult) -> None:
        pending = self._current
        self._current = None
        if pending.on_done is not None:
            pending.on_done(result)
        if self._current is None:
            self._start_next()

    def _on_frame(self, frame: Frame) -> None:
        if frame.kind is FrameKind.DOT154_ACK:
            self._on_ack(frame)
            return
        if frame.kind is not FrameKind.DOT154_DATA:
            return
        if frame.dst is None:
            if self.receive_handler is not None:
                self.receive_handler(frame.transmitter, frame.payload, None)
            return
        if frame.dst != self.node:
            return

        self._send_ack(frame)
        if self._last_seq_from.get(frame.transmitter) == frame.seq:
            return
        self._last_seq_from[frame.transmitter] = frame.seq
        if self.receive_handler is not None:
            self.receive_handler(frame.transmitter, frame.payload, self.node)

    def _send_ack(self, frame: Frame) -> None:
        start = self.sim.now + self.params.turnaround_us
        if self._radio_free_at > start:
            return
        ack = Frame(
            transmitter=self.node,
            channel=self.channel,
            length_bytes=DOT154_ACK_LENGTH,
            start=start,
            kind=FrameKind.DOT154_ACK,
            dst=frame.transmitter,
            seq=frame.seq,
        )
        if not (_awake_throughout(self.sleep, ack.start, ack.end)
                and _awake_throughout(self.peer_sleep.get(frame.transmitter), ack.start, ack.end)):
            logger.debug("Node %d: ack for %d skipped, a radio sleeps", self.node, frame.transmitter)
            return
        self._radio_free_at = ack.end
        self.medium.broadcast_frame(ack)

    def _on_ack(self, frame: Frame) -> None:
        pending = self._current
        if (frame.dst != self.node or pending is None or self._ack_timer is None
                or frame.seq != pending.seq or pending.dst != frame.transmitter):
            return
        self.sim.cancel(self._ack_timer)
        self._ack_timer = None
        self._finish(SendResult.ACKED)
