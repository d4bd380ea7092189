"""
Pytest configuration and shared fixtures for the test suite.
"""

import shutil
import tempfile
from pathlib import Path

import pytest

from meshsim.ndn import NdnNetwork, NdnParams, bench_prefix
from meshsim.sim_core import RadioMedium, Simulator, TopologyMatrix


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def sim():
    return Simulator(keep_trace=True)


@pytest.fixture
def sample_scenario():
    """A small, fast scenario document."""
    return {
        "name": "tiny-mesh",
        "stack": "btmesh",
        "topology": "full-mesh",
        "nodes": 3,
        "pattern": "one-to-many",
        "items_per_producer": 3,
        "seed": 5,
    }


def make_ndn(topology, params=None, seed=1):
    """Simulator, medium and NDN network over a topology."""
    simulator = Simulator()
    medium = RadioMedium(simulator, topology)
    ndn = NdnNetwork(simulator, medium, params or NdnParams(), seed=seed)
    return simulator, medium, ndn


def make_aggregation_net(producer_delay_us=100_000):
    """
    Producer 0 behind relay 1; consumers 2 and 3 hang off the relay.

    Routes for /bench/0 point along the tree toward the producer.
    """
    topology = TopologyMatrix(4, [(0, 1), (1, 2), (1, 3)])
    simulator, medium, ndn = make_ndn(topology, NdnParams(producer_delay_us=producer_delay_us))
    prefix = bench_prefix(0)
    ndn.add_route(1, prefix, 0)
    ndn.add_route(2, prefix, 1)
    ndn.add_route(3, prefix, 1)
    ndn.register_producer(0, prefix)
    return simulator, medium, ndn


@pytest.fixture
def aggregation_fixture():
    return make_aggregation_net()
