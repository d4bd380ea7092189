"""
BT Mesh Stack

Advertising bearer, managed flooding with a network message cache, group
publish/subscribe with optional acknowledged replies, and friendship.
"""

from .addresses import GROUP_BASE, AddressKind, MeshAddress
from .friend import FriendDelivery, FriendPoll, FriendQueue, PollOutcome
from .mesh import ItemId, MeshDelivery, MeshNetwork
from .network import (
    DEFAULT_TTL,
    MAX_ACCESS_PAYLOAD,
    NETWORK_PDU_OVERHEAD,
    MeshNetworkPdu,
    MessageCache,
)
from .node import DEFAULT_SCAN_WINDOW_US, MeshAction, MeshNode, MeshParams

__all__ = [
    'DEFAULT_SCAN_WINDOW_US',
    'DEFAULT_TTL',
    'GROUP_BASE',
    'MAX_ACCESS_PAYLOAD',
    'NETWORK_PDU_OVERHEAD',
    'AddressKind',
    'FriendDelivery',
    'FriendPoll',
    'FriendQueue',
    'PollOutcome',
    'ItemId',
    'MeshAction',
    'MeshAddress',
    'MeshDelivery',
    'MeshNetwork',
    'MeshNetworkPdu',
    'MeshNode',
    'MeshParams',
    'MessageCache',
]
