"""
A BT mesh network: one MeshNode per topology node on a shared medium.
"""

import logging
from typing import Callable, List, NamedTuple, Optional

from ..errors import FriendshipError
from ..sim_core import RadioMedium, SimTime, Simulator
from ..utilities import Stream, make_rng
from .addresses import MeshAddress
from .friend import FriendQueue, PollOutcome
from .network import MeshNetworkPdu
from .node import DEFAULT_SCAN_WINDOW_US, MeshAction, MeshNode, MeshParams

logger = logging.getLogger(__name__)


class ItemId(NamedTuple):
    node: int
    seq: int


class MeshDelivery(NamedTuple):
    """Access-layer delivery of a PDU at a node."""

    node: int
    src_node: int
    seq: int
    time: SimTime
    pdu: MeshNetworkPdu


class MeshNetwork:
    """
    Operations of the BT mesh stack addressed by node id.

    Args:
        sim: Simulation engine
        medium: Shared medium; one node per topology vertex
        params: Protocol knobs shared by all nodes
        seed: Run seed for jitter and scan phase streams
        scan_window_us: Scanner dwell per channel, None disables rotation
    """

    def __init__(self, sim: Simulator, medium: RadioMedium,
                 params: Optional[MeshParams] = None, seed: int = 0,
                 scan_window_us: Optional[int] = DEFAULT_SCAN_WINDOW_US):
        self.sim = sim
        self.medium = medium
        self.params = params or MeshParams()
        self.nodes: List[MeshNode] = [
            MeshNode(v, sim, medium,
                     rng=make_rng(seed, Stream.ADV_JITTER, v),
                     params=self.params,
                     scan_window_us=scan_window_us,
                     scan_rng=make_rng(seed, Stream.SCAN_PHASE, v))
            for v in range(medium.topology.n)
        ]
        self.deliveries: List[MeshDelivery] = []
        self.listeners: List[Callable[[MeshDelivery], None]] = []
        for node in self.nodes:
            node.access_handlers.append(self._record_delivery)

    def node(self, v: int) -> MeshNode:
        return self.nodes[v]

    def _record_delivery(self, node: MeshNode, pdu: MeshNetworkPdu) -> None:
        delivery = MeshDelivery(node.node, pdu.src.node, pdu.seq, self.sim.now, pdu)
        self.deliveries.append(delivery)
        for listener in self.listeners:
            listener(delivery)

    def subscribe(self, v: int, address: MeshAddress) -> None:
        self.nodes[v].subscribe(address)

    def publish(self, v: int, dst: MeshAddress, payload: bytes = b'',
                ack_required: bool = False) -> ItemId:
        return ItemId(v, self.nodes[v].publish(dst, payload, ack_required))

    def advertise(self, v: int, pdu: MeshNetworkPdu, local: bool = False) -> None:
        self.nodes[v].advertise(pdu, local)

    def on_mesh_frame(self, v: int, pdu: MeshNetworkPdu) -> MeshAction:
        return self.nodes[v].on_mesh_frame(pdu)

    def send_ack_reply(self, v: int, original: MeshNetworkPdu, payload: bytes = b'') -> ItemId:
        return ItemId(v, self.nodes[v].send_ack_reply(original, payload))

    def publish_time(self, item: ItemId) -> SimTime:
        return self.nodes[item.node].published[item.seq]

    # -- friendship -------------------------------------------------------

    def establish_friendship(self, friend: int, lpn: int) -> FriendQueue:
        """
        Make `friend` queue traffic for `lpn`.

        The LPN stops relaying and sleeps until it polls.

        Raises:
            FriendshipError: LPN already has a friend, or friend == lpn
        """
        if friend == lpn:
            raise FriendshipError(f"node {lpn} cannot befriend itself")
        lpn_node = self.nodes[lpn]
        if lpn_node.friend is not None:
            raise FriendshipError(f"node {lpn} already has friend {lpn_node.friend}")
        queue = self.nodes[friend].add_lpn(lpn_node)
        lpn_node.friend = friend
        lpn_node.relay_enabled = False
        lpn_node.sleep()
        logger.debug("Friendship %d -> %d established", friend, lpn)
        return queue

    def friend_queue(self, lpn: int) -> FriendQueue:
        friend = self.nodes[lpn].friend
        if friend is None:
            raise FriendshipError(f"node {lpn} has no friend")
        return self.nodes[friend].friend_queues[lpn]

    def friend_enqueue(self, friend: int, lpn: int, pdu: MeshNetworkPdu) -> bool:
        return self.nodes[friend].friend_enqueue(self.nodes[lpn], pdu)

    def lpn_poll(self, lpn: int) -> PollOutcome:
        """
        Wake lpn and put a Friend Poll on air.

        The friend drains its queue only when it hears the poll, answering
        each queued PDU with its own advertising event; a lost poll leaves
        the queue intact. The LPN sleeps again after the last answer or when
        its receive window closes.

        Returns:
            The poll outcome; it fills in while the simulation runs

        Raises:
            FriendshipError: lpn has no friend
        """
        lpn_node = self.nodes[lpn]
        if lpn_node.friend is None:
            raise FriendshipError(f"poll from node {lpn} without friendship")
        logger.debug("LPN %d polls friend %d", lpn, lpn_node.friend)
        return lpn_node.poll()
