"""
NDN Stack

Interest/Data forwarding with FIB longest-prefix match, PIT aggregation and
consumer retransmission, and an LRU content store.
"""

from .forwarder import InterestAction, NdnNode, NdnParams, Producer, TimerOutcome
from .network import NdnNetwork
from .packets import (
    BENCH_PREFIX,
    DEFAULT_INTEREST_LIFETIME_US,
    Data,
    Interest,
    Name,
    bench_name,
    bench_prefix,
)
from .tables import (
    DEFAULT_CS_CAPACITY,
    ContentStore,
    Face,
    FaceKind,
    Fib,
    FibEntry,
    Pit,
    PitEntry,
    RequestHandle,
    RequestStatus,
)

__all__ = [
    'BENCH_PREFIX',
    'DEFAULT_CS_CAPACITY',
    'DEFAULT_INTEREST_LIFETIME_US',
    'ContentStore',
    'Data',
    'Face',
    'FaceKind',
    'Fib',
    'FibEntry',
    'Interest',
    'InterestAction',
    'Name',
    'NdnNetwork',
    'NdnNode',
    'NdnParams',
    'Pit',
    'PitEntry',
    'Producer',
    'RequestHandle',
    'RequestStatus',
    'TimerOutcome',
    'bench_name',
    'bench_prefix',
]
