"""
Network layer records: the network PDU and the network message cache.
"""

from collections import OrderedDict
from dataclasses import dataclass, replace
from typing import Tuple

from ..errors import ProtocolError
from .addresses import MeshAddress

MAX_TTL = 127
SEQ_LIMIT = 1 << 24

# Network header, lower transport header and NetMIC on top of the access payload.
NETWORK_PDU_OVERHEAD = 14
MAX_ACCESS_PAYLOAD = 11

DEFAULT_TTL = 7
DEFAULT_CACHE_CAPACITY = 64

CacheKey = Tuple[int, int]


@dataclass(frozen=True)
class MeshNetworkPdu:
    """Network-layer unit; the payload stays opaque."""

    src: MeshAddress
    dst: MeshAddress
    ttl: int
    seq: int
    payload: bytes = b''
    ack_required: bool = False

    def __post_init__(self):
        if not self.src.is_unicast:
            raise ProtocolError(f"PDU source {self.src} is not a unicast address")
        if not 0 <= self.ttl <= MAX_TTL:
            raise ProtocolError(f"TTL {self.ttl} outside 0..{MAX_TTL}")
        if not 0 <= self.seq < SEQ_LIMIT:
            raise ProtocolError(f"sequence number {self.seq} exceeds 24 bits")

    @property
    def key(self) -> CacheKey:
        return (self.src.value, self.seq)

    @property
    def length_bytes(self) -> int:
        return len(self.payload) + NETWORK_PDU_OVERHEAD

    def relayed(self) -> 'MeshNetworkPdu':
        """Copy for re-advertisement, one hop less."""
        if self.ttl < 2:
            raise ProtocolError(f"PDU with TTL {self.ttl} must not be relayed")
        return replace(self, ttl=self.ttl - 1)


class MessageCache:
    """
    Bounded FIFO of recently seen (src, seq) keys.

    Args:
        capacity: Maximum number of keys; the oldest is evicted first
    """

    def __init__(self, capacity: int = DEFAULT_CACHE_CAPACITY):
        if capacity < 1:
            raise ProtocolError("message cache capacity must be positive")
        self.capacity = capacity
        self._keys: 'OrderedDict[CacheKey, None]' = OrderedDict()
        self.evictions = 0

    def add(self, key: CacheKey) -> bool:
        """Insert key; returns False when it was already known."""
        if key in self._keys:
            return False
        self._keys[key] = None
        if len(self._keys) > self.capacity:
            self._keys.popitem(last=False)
            self.evictions += 1
        return True

    def __contains__(self, key: CacheKey) -> bool:
        return key in self._keys

    def __len__(self) -> int:
        return len(self._keys)
