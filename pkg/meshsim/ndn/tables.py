"""
Faces and the three forwarding tables: FIB, PIT and content store.
"""

from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Set

from ..errors import ConfigError, ProtocolError
from ..sim_core import EventHandle, SimTime
from .packets import Data, Interest, Name

DEFAULT_CS_CAPACITY = 30


class FaceKind(Enum):
    UNICAST = 'unicast'
    BROADCAST = 'broadcast'
    APP = 'app'


@dataclass(frozen=True)
class Face:
    face_id: int
    kind: FaceKind
    neighbor: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is FaceKind.UNICAST:
            return f"face{self.face_id}->{self.neighbor}"
        return f"face{self.face_id}({self.kind.value})"


@dataclass
class FibEntry:
    prefix: Name
    faces: List[Face] = field(default_factory=list)


class Fib:
    """Longest-prefix-match forwarding table."""

    def __init__(self):
        self._entries: Dict[Name, FibEntry] = {}

    def add_route(self, prefix: Name, face: Face) -> FibEntry:
        entry = self._entries.setdefault(prefix, FibEntry(prefix))
        if face not in entry.faces:
            entry.faces.append(face)
        return entry

    def remove_prefix(self, prefix: Name) -> None:
        self._entries.pop(prefix, None)

    def lookup(self, name: Name) -> Optional[FibEntry]:
        for length in range(len(name), -1, -1):
            entry = self._entries.get(name.prefix(length))
            if entry is not None and entry.faces:
                return entry
        return None

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[FibEntry]:
        return iter(self._entries.values())


class RequestStatus(Enum):
    PENDING = 'pending'
    SATISFIED = 'satisfied'
    TIMED_OUT = 'timed-out'
    UNROUTABLE = 'unroutable'


@dataclass
class RequestHandle:
    """A local application's request for one name."""

    consumer: int
    name: Name
    requested_at: SimTime
    status: RequestStatus = RequestStatus.PENDING
    completed_at: Optional[SimTime] = None
    data: Optional[Data] = None
    from_local_cache: bool = False
    first_transmission: Optional[SimTime] = None
    on_complete: Optional[Callable[['RequestHandle'], None]] = field(default=None, repr=False)

    @property
    def done(self) -> bool:
        return self.status is not RequestStatus.PENDING

    @property
    def satisfied(self) -> bool:
        return self.status is RequestStatus.SATISFIED

    @property
    def clock_start(self) -> SimTime:
        """First on-air Interest for this request, or the request itself when none went out."""
        return self.first_transmission if self.first_transmission is not None else self.requested_at

    @property
    def latency(self) -> Optional[SimTime]:
        if self.completed_at is None or not self.satisfied:
            return None
        return self.completed_at - self.requested_at

    def finish(self, status: RequestStatus, now: SimTime, data: Optional[Data] = None) -> None:
        if self.done:
            return
        self.status = status
        self.completed_at = now
        self.data = data
        if self.on_complete is not None:
            self.on_complete(self)


@dataclass
class PitEntry:
    """Pending Interest state for one name."""

    name: Name
    created: SimTime
    lifetime_us: SimTime
    interest: Interest
    incoming_faces: List[Face] = field(default_factory=list)
    nonces: Set[int] = field(default_factory=set)
    retransmit_count: int = 0
    max_retries: int = 0
    retry_timer: Optional[EventHandle] = None
    expiry_timer: Optional[EventHandle] = None
    local_requests: List[RequestHandle] = field(default_factory=list)

    @property
    def expires_at(self) -> SimTime:
        return self.created + self.lifetime_us

    def add_face(self, face: Face) -> bool:
        if face in self.incoming_faces:
            return False
        self.incoming_faces.append(face)
        return True

    def note_transmission(self, t: SimTime) -> None:
        for handle in self.local_requests:
            if handle.first_transmission is None:
                handle.first_transmission = t


class Pit:
    def __init__(self):
        self._entries: Dict[Name, PitEntry] = {}

    def get(self, name: Name) -> Optional[PitEntry]:
        return self._entries.get(name)

    def insert(self, entry: PitEntry) -> PitEntry:
        if entry.name in self._entries:
            raise ProtocolError(f"PIT already holds {entry.name}")
        self._entries[entry.name] = entry
        return entry

    def remove(self, name: Name) -> Optional[PitEntry]:
        return self._entries.pop(name, None)

    def __contains__(self, name: Name) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)


class ContentStore:
    """
    Exact-name Data cache with least-recently-used eviction.

    Args:
        capacity: Maximum number of Data packets held
    """

    def __init__(self, capacity: int = DEFAULT_CS_CAPACITY):
        if capacity < 0:
            raise ConfigError("content store capacity must not be negative")
        self.capacity = capacity
        self._entries: 'OrderedDict[Name, Data]' = OrderedDict()
        self.evictions = 0

    def lookup(self, name: Name) -> Optional[Data]:
        data = self._entries.get(name)
        if data is not None:
            self._entries.move_to_end(name)
        return data

    def insert(self, data: Data) -> None:
        if self.capacity == 0:
            return
        self._entries[data.name] = data
        self._entries.move_to_end(data.name)
        while len(self._entries) > self.capacity:
            self._entries.popitem(last=False)
            self.evictions += 1

    def __contains__(self, name: Name) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> List[Name]:
        """Cached names, least recently used first."""
        return list(self._entries)
