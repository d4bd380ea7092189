"""
An NDN network: one forwarder and one CSMA/ARQ MAC per topology node.
"""

from typing import Callable, List, Optional

from ..errors import ConfigError
from ..sim_core import CsmaMac, CsmaParams, RadioMedium, Simulator
from ..utilities import Stream, make_rng
from .forwarder import InterestAction, NdnNode, NdnParams, Producer, TimerOutcome
from .packets import Data, Interest, Name
from .tables import Face, FibEntry, PitEntry, RequestHandle


class NdnNetwork:
    """
    Operations of the NDN stack addressed by node id.

    Every node gets a unicast face per visible neighbour; FIB routes are
    provisioned by the caller.

    Args:
        sim: Simulation engine
        medium: Shared medium
        params: Forwarding knobs shared by all nodes
        seed: Run seed for backoff and nonce streams
        csma: MAC constants
    """

    def __init__(self, sim: Simulator, medium: RadioMedium,
                 params: Optional[NdnParams] = None, seed: int = 0,
                 csma: Optional[CsmaParams] = None):
        self.sim = sim
        self.medium = medium
        self.params = params or NdnParams()
        topology = medium.topology

        self.macs: List[CsmaMac] = [
            CsmaMac(v, sim, medium, make_rng(seed, Stream.BACKOFF, v), csma)
            for v in range(topology.n)
        ]
        self.nodes: List[NdnNode] = [
            NdnNode(v, sim, self.macs[v], make_rng(seed, Stream.NONCE, v), self.params)
            for v in range(topology.n)
        ]
        for v, node in enumerate(self.nodes):
            for u in topology.neighbors(v):
                node.add_neighbor(u)

    def node(self, v: int) -> NdnNode:
        return self.nodes[v]

    def add_route(self, v: int, prefix: Name, next_hop: Optional[int] = None) -> FibEntry:
        """Route prefix at v toward next_hop; None uses the broadcast face."""
        node = self.nodes[v]
        if next_hop is None:
            if node.broadcast_face is None:
                raise ConfigError(f"node {v} has no broadcast face")
            return node.add_route(prefix, node.broadcast_face)
        return node.add_route(prefix, node.face_to(next_hop))

    def express_interest(self, v: int, name: Name,
                         on_complete: Optional[Callable[[RequestHandle], None]] = None,
                         lifetime_us: Optional[int] = None,
                         max_retries: Optional[int] = None) -> RequestHandle:
        return self.nodes[v].express_interest(name, on_complete, lifetime_us, max_retries)

    def on_interest(self, v: int, interest: Interest, in_face: Face) -> InterestAction:
        return self.nodes[v].on_interest(interest, in_face)

    def on_data(self, v: int, data: Data, in_face: Face) -> int:
        return self.nodes[v].on_data(data, in_face)

    def pit_timer_fire(self, v: int, entry: PitEntry) -> TimerOutcome:
        return self.nodes[v].pit_timer_fire(entry)

    def register_producer(self, v: int, prefix: Name, app: Optional[Producer] = None) -> None:
        self.nodes[v].register_producer(prefix, app)

    def put_data(self, v: int, data: Data) -> bool:
        return self.nodes[v].put_data(data)
