"""
NDN names and packets.

Packets are plain records; sizes approximate their TLV encoding so that
frame airtimes are realistic.
"""

from dataclasses import dataclass
from typing import Tuple, Union

from ..errors import ProtocolError
from ..sim_core import SECOND, SimTime

DEFAULT_INTEREST_LIFETIME_US = 10 * SECOND
BENCH_PREFIX = 'bench'

Component = Union[bytes, str, int]


def _component(value: Component) -> bytes:
    if isinstance(value, bytes):
        return value
    return str(value).encode('utf-8')


def _tlv(value_length: int) -> int:
    """Type and length octets plus the value."""
    return 2 + value_length


@dataclass(frozen=True, order=True)
class Name:
    """Hierarchical name made of byte-string components."""

    components: Tuple[bytes, ...] = ()

    @classmethod
    def of(cls, *components: Component) -> 'Name':
        return cls(tuple(_component(c) for c in components))

    @classmethod
    def from_uri(cls, uri: str) -> 'Name':
        """Parse '/a/b/c'; '/' is the empty (root) name."""
        return cls(tuple(part.encode('utf-8') for part in uri.split('/') if part))

    def to_uri(self) -> str:
        return '/' + '/'.join(c.decode('utf-8', 'replace') for c in self.components)

    def append(self, *components: Component) -> 'Name':
        return Name(self.components + tuple(_component(c) for c in components))

    def prefix(self, length: int) -> 'Name':
        return Name(self.components[:length])

    def is_prefix_of(self, other: 'Name') -> bool:
        """Component-wise prefix test; '/a' is not a prefix of '/ab'."""
        return other.components[:len(self.components)] == self.components

    @property
    def tlv_size(self) -> int:
        return _tlv(sum(_tlv(len(c)) for c in self.components))

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        return self.to_uri()


def bench_name(producer: int, seq: int) -> Name:
    """Name of item `seq` published by `producer`: /bench/<producer>/<seq>."""
    return Name.of(BENCH_PREFIX, producer, seq)


def bench_prefix(producer: int) -> Name:
    return Name.of(BENCH_PREFIX, producer)


@dataclass(frozen=True)
class Interest:
    name: Name
    nonce: int
    lifetime_us: SimTime = DEFAULT_INTEREST_LIFETIME_US

    def __post_init__(self):
        if not len(self.name):
            raise ProtocolError("Interest name must not be empty")
        if not 0 <= self.nonce < (1 << 32):
            raise ProtocolError(f"nonce {self.nonce} exceeds 32 bits")
        if self.lifetime_us <= 0:
            raise ProtocolError("Interest lifetime must be positive")

    @property
    def size(self) -> int:
        # name, nonce (4 octets), lifetime (4 octets)
        return _tlv(self.name.tlv_size + _tlv(4) + _tlv(4))


@dataclass(frozen=True)
class Data:
    name: Name
    payload: bytes = b''

    def __post_init__(self):
        if not len(self.name):
            raise ProtocolError("Data name must not be empty")

    @property
    def size(self) -> int:
        # name, content, minimal signature info and value
        return _tlv(self.name.tlv_size + _tlv(len(self.payload)) + _tlv(3) + _tlv(4))
