"""
Radio primitives: frames, link personalities, topology and scanner rotation.

All times are integer microseconds (SimTime).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError, SimulationError

SimTime = int

MS = 1_000
SECOND = 1_000_000

BLE_BITRATE = 1_000_000
DOT154_BITRATE = 250_000

ADVERTISING_CHANNELS = (37, 38, 39)
DOT154_CHANNEL = 26

# Fixed per-frame overhead on top of the carried PDU.
MESH_ADV_OVERHEAD = 14
DOT154_OVERHEAD = 11
DOT154_ACK_LENGTH = DOT154_OVERHEAD


class FrameKind(Enum):
    """Link personality of an on-air frame."""

    MESH_ADV = 'mesh-adv'
    DOT154_DATA = 'dot154-data'
    DOT154_ACK = 'dot154-ack'

    @property
    def bitrate(self) -> int:
        if self is FrameKind.MESH_ADV:
            return BLE_BITRATE
        return DOT154_BITRATE


def airtime_us(length_bytes: int, bitrate: int) -> int:
    """Airtime of length_bytes at bitrate, rounded up to whole microseconds."""
    return -(-(length_bytes * 8 * SECOND) // bitrate)


@dataclass
class Frame:
    """One on-air transmission."""

    transmitter: int
    channel: int
    length_bytes: int
    start: SimTime
    kind: FrameKind
    payload: Any = None
    dst: Optional[int] = None
    retransmission: bool = False
    seq: int = 0

    def __post_init__(self):
        if self.length_bytes <= 0:
            raise SimulationError("frame length must be positive")

    @property
    def airtime(self) -> int:
        return airtime_us(self.length_bytes, self.kind.bitrate)

    @property
    def end(self) -> SimTime:
        return self.start + self.airtime


class TopologyMatrix:
    """
    Symmetric, irreflexive visibility relation over node ids 0..n-1.

    Realizes the virtual topology that MAC address filtering enforces on a
    physically fully connected testbed.
    """

    def __init__(self, n: int, pairs: Iterable[Tuple[int, int]] = ()):
        if n < 1:
            raise ConfigError("topology needs at least one node")
        self.n = n
        self._visible = np.zeros((n, n), dtype=bool)
        self._neighbors: Optional[List[Tuple[int, ...]]] = None
        for a, b in pairs:
            self.add_link(a, b)

    @classmethod
    def full_mesh(cls, n: int) -> 'TopologyMatrix':
        return cls(n, ((a, b) for a in range(n) for b in range(a + 1, n)))

    @classmethod
    def line(cls, n: int) -> 'TopologyMatrix':
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    def add_link(self, a: int, b: int) -> None:
        if a == b:
            raise ConfigError(f"node {a} cannot be linked to itself")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ConfigError(f"link ({a}, {b}) outside 0..{self.n - 1}")
        self._visible[a, b] = True
        self._visible[b, a] = True
        self._neighbors = None

    def visible(self, a: int, b: int) -> bool:
        return bool(self._visible[a, b])

    def neighbors(self, node: int) -> Tuple[int, ...]:
        if self._neighbors is None:
            self._neighbors = [tuple(int(v) for v in np.flatnonzero(row)) for row in self._visible]
        return self._neighbors[node]

    def pairs(self) -> List[Tuple[int, int]]:
        upper = np.argwhere(np.triu(self._visible, k=1))
        return [(int(a), int(b)) for a, b in upper]

    def union(self, other: 'TopologyMatrix') -> 'TopologyMatrix':
        if other.n != self.n:
            raise ConfigError("cannot combine topologies of different size")
        merged = TopologyMatrix(self.n)
        merged._visible = self._visible | other._visible
        return merged

    def is_connected(self) -> bool:
        seen = {0}
        frontier = [0]
        while frontier:
            node = frontier.pop()
            for nxt in self.neighbors(node):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return len(seen) == self.n

    def __len__(self) -> int:
        return len(self.pairs())


@dataclass
class ScanRotation:
    """
    Scanner that dwells `window_us` on each advertising channel in turn.

    window_us None disables rotation and pins the scanner to fixed_channel.
    """

    window_us: Optional[int] = None
    phase_us: int = 0
    fixed_channel: int = ADVERTISING_CHANNELS[0]
    channels: Tuple[int, ...] = field(default=ADVERTISING_CHANNELS)

    def __post_init__(self):
        if self.window_us is not None and self.window_us <= 0:
            raise ConfigError("scan window must be positive")

    def channel_at(self, t: SimTime) -> int:
        if self.window_us is None:
            return self.fixed_channel
        slot = (t + self.phase_us) // self.window_us
        return self.channels[slot % len(self.channels)]

    def listens_throughout(self, channel: int, start: SimTime, end: SimTime) -> bool:
        """True if the scanner sits on channel for the whole window [start, end)."""
        if self.window_us is None:
            return channel == self.fixed_channel
        first = (start + self.phase_us) // self.window_us
        last = (end - 1 + self.phase_us) // self.window_us
        return first == last and self.channels[first % len(self.channels)] == channel
