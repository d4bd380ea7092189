"""
BT mesh 16-bit addresses.
"""

from dataclasses import dataclass
from enum import Enum

from ..errors import ConfigError

UNASSIGNED = 0x0000
UNICAST_MAX = 0x7FFF
VIRTUAL_BASE = 0x8000
GROUP_BASE = 0xC000
ADDRESS_MAX = 0xFFFF


class AddressKind(Enum):
    UNASSIGNED = 'unassigned'
    UNICAST = 'unicast'
    VIRTUAL = 'virtual'
    GROUP = 'group'


@dataclass(frozen=True, order=True)
class MeshAddress:
    """A 16-bit mesh address; its kind follows from the value range."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value <= ADDRESS_MAX:
            raise ConfigError(f"mesh address {self.value:#x} outside 16 bits")

    @property
    def kind(self) -> AddressKind:
        if self.value == UNASSIGNED:
            return AddressKind.UNASSIGNED
        if self.value <= UNICAST_MAX:
            return AddressKind.UNICAST
        if self.value < GROUP_BASE:
            return AddressKind.VIRTUAL
        return AddressKind.GROUP

    @property
    def is_unicast(self) -> bool:
        return self.kind is AddressKind.UNICAST

    @classmethod
    def for_node(cls, node: int) -> 'MeshAddress':
        """Unicast address assigned to node id `node` (id + 1)."""
        if not 0 <= node < UNICAST_MAX:
            raise ConfigError(f"node id {node} has no unicast address")
        return cls(node + 1)

    @classmethod
    def group(cls, offset: int = 0) -> 'MeshAddress':
        address = cls(GROUP_BASE + offset)
        if address.kind is not AddressKind.GROUP:
            raise ConfigError(f"group offset {offset} out of range")
        return address

    @property
    def node(self) -> int:
        """Node id behind a unicast address."""
        if not self.is_unicast:
            raise ConfigError(f"{self} is not a unicast address")
        return self.value - 1

    def __str__(self) -> str:
        return f"{self.value:#06x}"
