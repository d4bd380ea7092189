"""
BT-ICN Friend Role

Friend/low-power-node behaviour expressed with unmodified NDN primitives:
long-lived Interests toward sleepy producers and friend-cached answers for
sleepy consumers.
"""

from .friend import DEFAULT_MAX_ATTEMPTS, BtIcnNetwork, FriendSubscription, LpnRequest
from .reuse import ReuseComparison, ReuseConfig, reuse_comparison, reuse_topology
from .sleep import (
    DEFAULT_AWAKE_WINDOW_US,
    DEFAULT_LONG_LIVED_LIFETIME_US,
    DEFAULT_SLEEP_CYCLE_US,
    LongLivedInterest,
    SleepSchedule,
)

__all__ = [
    'DEFAULT_AWAKE_WINDOW_US',
    'DEFAULT_LONG_LIVED_LIFETIME_US',
    'DEFAULT_MAX_ATTEMPTS',
    'DEFAULT_SLEEP_CYCLE_US',
    'BtIcnNetwork',
    'FriendSubscription',
    'LongLivedInterest',
    'LpnRequest',
    'ReuseComparison',
    'ReuseConfig',
    'SleepSchedule',
    'reuse_comparison',
    'reuse_topology',
]
