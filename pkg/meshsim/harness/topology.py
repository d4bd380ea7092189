"""
Scenario topologies and static route provisioning.
"""

from collections import deque
from typing import Dict, Iterable, Mapping, Optional, Sequence

from ..errors import ConfigError
from ..ndn import NdnNetwork, bench_prefix
from ..sim_core import TopologyMatrix


def build_topology(kind: str, n: int) -> TopologyMatrix:
    """
    Visibility relation of a scenario.

    Args:
        kind: 'full-mesh' (every pair visible) or 'line' (consecutive pairs)
        n: Number of nodes, at least 2

    Raises:
        ConfigError: Unknown kind or n < 2
    """
    if n < 2:
        raise ConfigError("a topology needs at least 2 nodes")
    if kind == 'full-mesh':
        return TopologyMatrix.full_mesh(n)
    if kind == 'line':
        return TopologyMatrix.line(n)
    raise ConfigError(f"unknown topology '{kind}'")


def interference_topology(n: int, pairs: Sequence[Sequence[int]]) -> Optional[TopologyMatrix]:
    """Extra pairs that disturb but cannot decode each other; None when empty."""
    if not pairs:
        return None
    return TopologyMatrix(n, [(int(a), int(b)) for a, b in pairs])


def next_hops_toward(topology: TopologyMatrix, target: int) -> Dict[int, int]:
    """
    Shortest-path next hop of every node toward target (BFS, lowest id first).

    Unreachable nodes and the target itself are absent from the result.
    """
    hops: Dict[int, int] = {}
    seen = {target}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in topology.neighbors(v):
            if u not in seen:
                seen.add(u)
                hops[u] = v
                queue.append(u)
    return hops


def hop_distances(topology: TopologyMatrix, source: int) -> Dict[int, int]:
    """Hop count of every node reachable from source; source itself is 0."""
    distances = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in topology.neighbors(v):
            if u not in distances:
                distances[u] = distances[v] + 1
                queue.append(u)
    return distances


def provision_ndn_routes(ndn: NdnNetwork, producers: Iterable[int],
                         via: Optional[Mapping[int, int]] = None) -> int:
    """
    Install /bench/<producer> routes on every node along shortest paths.

    Args:
        ndn: Network to provision
        producers: Producer node ids
        via: producer -> node that reaches it (a friend); routes of other
            nodes lead to that node instead of the producer

    Returns:
        Number of FIB routes installed
    """
    topology = ndn.medium.topology
    via = via or {}
    installed = 0
    for producer in producers:
        gateway = via.get(producer, producer)
        for v, hop in sorted(next_hops_toward(topology, gateway).items()):
            if v == producer:
                continue
            ndn.add_route(v, bench_prefix(producer), hop)
            installed += 1
        if gateway != producer:
            ndn.add_route(gateway, bench_prefix(producer), producer)
            installed += 1
    return installed
