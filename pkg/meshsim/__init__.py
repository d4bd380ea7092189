"""
meshsim

Discrete-event simulator comparing BT mesh managed flooding with NDN
Interest/Data forwarding on the same emulated radio medium.

Modules:
- sim_core: Event engine, radio medium, BLE advertising and CSMA/ARQ links
- btmesh: Advertising bearer, relaying, group subscriptions, friendship
- ndn: Forwarder with FIB, PIT and content store
- bticn: Friend/low-power-node behaviour on top of NDN
- harness: Scenarios, records, statistics, batches and acceptance checks
- file_ops: Run directories, JSON and CSV files
- data_processing: CDFs, percentiles and summary statistics
- automation: Sequential or parallel batch task execution
- utilities: Seeded random streams, hashing, dictionary merging
"""

__version__ = "0.1.0"
__description__ = "BT mesh vs. NDN wireless network simulator"

from . import automation
from . import bticn
from . import btmesh
from . import data_processing
from . import file_ops
from . import harness
from . import ndn
from . import sim_core
from . import utilities
from .errors import (
    ConfigError,
    FriendshipError,
    MeshSimError,
    MetricsError,
    NoRouteError,
    PayloadTooLargeError,
    ProtocolError,
    SimulationError,
)

__all__ = [
    "automation",
    "bticn",
    "btmesh",
    "data_processing",
    "file_ops",
    "harness",
    "ndn",
    "sim_core",
    "utilities",
    "ConfigError",
    "FriendshipError",
    "MeshSimError",
    "MetricsError",
    "NoRouteError",
    "PayloadTooLargeError",
    "ProtocolError",
    "SimulationError",
]
