"""
Deterministic discrete-event engine.

Events are kept in a heap ordered by (time, insertion order), so events
sharing a timestamp run first-in first-out.
"""

import hashlib
import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

from ..errors import SimulationError
from .radio import SimTime

logger = logging.getLogger(__name__)


@dataclass
class SimEvent:
    """Executable event: a callback with its arguments and a trace label."""

    callback: Callable[..., Any]
    args: Tuple[Any, ...] = ()
    label: str = ''

    def __post_init__(self):
        if not self.label:
            self.label = getattr(self.callback, '__qualname__', repr(self.callback))

    def execute(self) -> Any:
        return self.callback(*self.args)


class EventHandle:
    """Reference to a scheduled event; allows cancellation."""

    __slots__ = ('time', 'order', 'event', 'cancelled')

    def __init__(self, time: SimTime, order: int, event: SimEvent):
        self.time = time
        self.order = order
        self.event = event
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True

    @property
    def active(self) -> bool:
        return not self.cancelled

    def __lt__(self, other: 'EventHandle') -> bool:
        return (self.time, self.order) < (other.time, other.order)


class Simulator:
    """
    Single-threaded event queue and clock.

    Args:
        keep_trace: Also keep the executed (time, order, label) tuples in memory
    """

    def __init__(self, keep_trace: bool = False):
        self.now: SimTime = 0
        self.executed = 0
        self._queue: List[EventHandle] = []
        self._order = itertools.count()
        self._digest = hashlib.sha256()
        self.trace: Optional[List[Tuple[SimTime, int, str]]] = [] if keep_trace else None

    def schedule(self, event: SimEvent, at: SimTime) -> EventHandle:
        """
        Schedule event to execute at time `at`.

        Raises:
            SimulationError: If `at` lies before the current time
        """
        at = int(at)
        if at < self.now:
            raise SimulationError(
                f"cannot schedule {event.label} at {at} us, clock is at {self.now} us")
        handle = EventHandle(at, next(self._order), event)
        heapq.heappush(self._queue, handle)
        return handle

    def call_at(self, at: SimTime, callback: Callable[..., Any], *args: Any,
                label: str = '') -> EventHandle:
        return self.schedule(SimEvent(callback, args, label), at)

    def call_later(self, delay: SimTime, callback: Callable[..., Any], *args: Any,
                   label: str = '') -> EventHandle:
        if delay < 0:
            raise SimulationError(f"negative delay {delay} us")
        return self.schedule(SimEvent(callback, args, label), self.now + delay)

    @staticmethod
    def cancel(handle: Optional[EventHandle]) -> None:
        if handle is not None:
            handle.cancel()

    @property
    def pending(self) -> int:
        return sum(1 for handle in self._queue if handle.active)

    def peek(self) -> Optional[SimTime]:
        """Time of the next live event, or None when the queue is drained."""
        while self._queue and self._queue[0].cancelled:
            heapq.heappop(self._queue)
        return self._queue[0].time if self._queue else None

    def run(self, until: SimTime) -> int:
        """
        Execute every event with time <= until, then set the clock to until.

        Returns:
            Number of events executed by this call
        """
        count = 0
        queue = self._queue
        while queue and queue[0].time <= until:
            handle = heapq.heappop(queue)
            if handle.cancelled:
                continue
            self.now = handle.time
            label = handle.event.label
            self._digest.update(f"{handle.time}:{handle.order}:{label}\n".encode('ascii', 'replace'))
            if self.trace is not None:
                self.trace.append((handle.time, handle.order, label))
            handle.event.execute()
            count += 1

        self.now = max(self.now, int(until))
        self.executed += count
        logger.debug("Executed %d events, clock at %d us", count, self.now)
        return count

    def run_until_idle(self, limit: SimTime) -> int:
        """Run until the queue drains or the clock would pass limit."""
        count = 0
        while True:
            nxt = self.peek()
            if nxt is None or nxt > limit:
                return count
            count += self.run(nxt)

    def trace_digest(self) -> str:
        """SHA-256 over the executed event trace so far."""
        return self._digest.hexdigest()
