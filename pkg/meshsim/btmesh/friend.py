"""
Friend feature: per-LPN message queues and the on-air control records.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, List, Optional

from ..errors import ProtocolError
from ..sim_core import SimTime
from .network import NETWORK_PDU_OVERHEAD, MeshNetworkPdu

DEFAULT_FRIEND_QUEUE_CAPACITY = 16

# Friend Poll carries a single parameter octet.
FRIEND_POLL_LENGTH = 1 + NETWORK_PDU_OVERHEAD


@dataclass(frozen=True)
class FriendPoll:
    """Poll sent by a low-power node to its friend."""

    lpn: int
    friend: int


@dataclass(frozen=True)
class FriendDelivery:
    """A queued PDU handed from friend to LPN; other nodes ignore it."""

    lpn: int
    pdu: MeshNetworkPdu
    more: bool = False

    @property
    def length_bytes(self) -> int:
        return self.pdu.length_bytes


class FriendQueue:
    """
    Bounded FIFO of PDUs a friend keeps for one sleeping LPN.

    Entries leave the queue on their first retrieval.
    """

    def __init__(self, friend: int, lpn: int, capacity: int = DEFAULT_FRIEND_QUEUE_CAPACITY):
        if capacity < 1:
            raise ProtocolError("friend queue capacity must be positive")
        self.friend = friend
        self.lpn = lpn
        self.capacity = capacity
        self._queue: Deque[MeshNetworkPdu] = deque()
        self.evicted = 0

    def append(self, pdu: MeshNetworkPdu) -> None:
        self._queue.append(pdu)
        if len(self._queue) > self.capacity:
            self._queue.popleft()
            self.evicted += 1

    def drain(self) -> List[MeshNetworkPdu]:
        """Remove and return every queued PDU, oldest first."""
        entries = list(self._queue)
        self._queue.clear()
        return entries

    def __len__(self) -> int:
        return len(self._queue)

    def __iter__(self):
        return iter(list(self._queue))


@dataclass
class PollOutcome:
    """
    What one Friend Poll achieved; filled in as frames arrive.

    served counts the PDUs the friend put on air after hearing the poll,
    received the ones the LPN actually got before going back to sleep.
    """

    lpn: int
    friend: int
    polled_at: SimTime
    answered: bool = False
    served: int = 0
    received: List[MeshNetworkPdu] = field(default_factory=list)
    closed_at: Optional[SimTime] = None

    @property
    def received_count(self) -> int:
        return len(self.received)
