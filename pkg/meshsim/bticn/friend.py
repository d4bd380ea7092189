"""
Friend role built from plain NDN primitives.

Sleepy producers are reached through long-lived Interests that their friend
keeps pending; sleepy consumers repeat requests that the friend's content
store answers once the upstream fetch has completed.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import ConfigError, FriendshipError
from ..ndn import Data, Fib, Name, NdnNetwork, RequestHandle
from ..sim_core import MS, SimTime
from .sleep import LongLivedInterest, SleepSchedule

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 3

# Requests are not started in the last moments of an awake window.
WAKE_GUARD_US = 20 * MS


@dataclass
class FriendSubscription:
    """Standing subscription of a friend to the items of one LPN."""

    friend: int
    lpn: int
    prefix: Name
    lifetime_us: SimTime
    next_seq: int = 1
    received: List[Tuple[int, SimTime]] = field(default_factory=list)
    pending: Optional[RequestHandle] = None
    on_item: Optional[Callable[[int, SimTime], None]] = field(default=None, repr=False)


@dataclass
class LpnRequest:
    """Outcome of an LPN request that may take several wake cycles."""

    lpn: int
    name: Name
    requested_at: SimTime
    repeat_after_us: SimTime
    max_attempts: int
    attempts: int = 0
    last_attempt_at: Optional[SimTime] = None
    completed_at: Optional[SimTime] = None
    satisfied: bool = False
    failed: bool = False
    served_from_friend_cache: bool = False
    on_complete: Optional[Callable[['LpnRequest'], None]] = field(default=None, repr=False)

    @property
    def done(self) -> bool:
        return self.satisfied or self.failed

    @property
    def latency(self) -> Optional[SimTime]:
        if not self.satisfied:
            return None
        return self.completed_at - self.requested_at


class BtIcnNetwork:
    """
    Friendships between always-on friends and duty-cycled LPNs on an NDN network.

    Args:
        ndn: The underlying NDN network
        friend_pit_lifetime_us: Minimum PIT lifetime a friend keeps for
            Interests of its LPNs (default: the regular Interest lifetime)
    """

    def __init__(self, ndn: NdnNetwork, friend_pit_lifetime_us: Optional[SimTime] = None):
        self.ndn = ndn
        self.sim = ndn.sim
        self.friend_pit_lifetime_us = (friend_pit_lifetime_us if friend_pit_lifetime_us is not None
                                       else ndn.params.interest_lifetime_us)
        self.schedules: Dict[int, SleepSchedule] = {}
        self.friends: Dict[int, int] = {}
        self.subscriptions: List[FriendSubscription] = []
        self.requests: List[LpnRequest] = []

    def set_sleep_schedule(self, node: int, schedule: SleepSchedule) -> None:
        """Duty-cycle node's radio; neighbours stop sending to it while it sleeps."""
        self.schedules[node] = schedule
        self.ndn.macs[node].set_sleep(schedule)
        for neighbor in self.ndn.medium.topology.neighbors(node):
            self.ndn.macs[neighbor].peer_sleep[node] = schedule

    def establish_friendship(self, friend: int, lpn: int,
                             schedule: Optional[SleepSchedule] = None) -> None:
        """
        Pair lpn with friend; the friend becomes the LPN's only next hop.

        Raises:
            FriendshipError: lpn already has a friend or friend == lpn
            ConfigError: Nodes are not neighbours or the LPN has no schedule
        """
        if friend == lpn:
            raise FriendshipError(f"node {lpn} cannot befriend itself")
        if lpn in self.friends:
            raise FriendshipError(f"node {lpn} already has friend {self.friends[lpn]}")
        if not self.ndn.medium.topology.visible(friend, lpn):
            raise ConfigError(f"friend {friend} is not a neighbour of LPN {lpn}")
        if schedule is not None:
            self.set_sleep_schedule(lpn, schedule)
        if lpn not in self.schedules:
            raise ConfigError(f"LPN {lpn} has no sleep schedule")

        self.friends[lpn] = friend
        self._route_via_friend(lpn)
        friend_node = self.ndn.node(friend)
        friend_node.min_pit_lifetime_us = max(friend_node.min_pit_lifetime_us,
                                              self.friend_pit_lifetime_us)
        logger.debug("BT-ICN friendship %d -> %d established", friend, lpn)

    def _route_via_friend(self, lpn: int) -> None:
        node = self.ndn.node(lpn)
        node.fib = Fib()
        for prefix, _ in node.producers:
            node.add_route(prefix, node.app_face)
        node.add_route(Name(), node.face_to(self.friends[lpn]))

    def _schedule(self, lpn: int) -> SleepSchedule:
        schedule = self.schedules.get(lpn)
        if schedule is None:
            raise ConfigError(f"node {lpn} has no sleep schedule")
        return schedule

    def _usable_wake(self, schedule: SleepSchedule, t: SimTime) -> SimTime:
        wake = schedule.next_wake(t)
        if schedule.remaining_awake(wake) < WAKE_GUARD_US:
            wake = schedule.next_wake(schedule.window_end(wake))
        return wake

    # -- sleepy producers -------------------------------------------------

    def friend_subscribe(self, friend: int, lpn: int, prefix: Name, lifetime_us: SimTime,
                         first_seq: int = 1,
                         on_item: Optional[Callable[[int, SimTime], None]] = None
                         ) -> FriendSubscription:
        """
        Keep a long-lived Interest for prefix/<seq> pending toward lpn.

        The first Interest goes out at the LPN's next wake; every satisfied
        Interest is followed at once by one for the next sequence number.

        Raises:
            ConfigError: lifetime_us does not exceed the LPN's sleep cycle
        """
        schedule = self._schedule(lpn)
        LongLivedInterest(prefix.append(first_seq), lifetime_us).check(schedule)
        if self.friends.get(lpn) != friend:
            raise FriendshipError(f"node {friend} is not the friend of LPN {lpn}")

        self.ndn.add_route(friend, prefix, lpn)
        subscription = FriendSubscription(friend, lpn, prefix, lifetime_us, first_seq,
                                          on_item=on_item)
        self.subscriptions.append(subscription)
        self.sim.call_at(self._usable_wake(schedule, self.sim.now), self._express_subscription,
                         subscription, label='bticn.subscribe')
        return subscription

    def _express_subscription(self, subscription: FriendSubscription) -> None:
        name = subscription.prefix.append(subscription.next_seq)

        def on_complete(handle: RequestHandle) -> None:
            self._on_subscription_complete(subscription, handle)

        subscription.pending = self.ndn.express_interest(
            subscription.friend, name, on_complete=on_complete,
            lifetime_us=subscription.lifetime_us, max_retries=0)

    def _on_subscription_complete(self, subscription: FriendSubscription,
                                  handle: RequestHandle) -> None:
        now = self.sim.now
        subscription.pending = None
        if handle.satisfied:
            seq = subscription.next_seq
            subscription.received.append((seq, now))
            subscription.next_seq += 1
            logger.debug("Friend %d received item %d of LPN %d",
                         subscription.friend, seq, subscription.lpn)
            if subscription.on_item is not None:
                subscription.on_item(seq, now)
        schedule = self._schedule(subscription.lpn)
        # an expired Interest may still be pending at the LPN for a few ms
        start = now if handle.satisfied else now + WAKE_GUARD_US
        self.sim.call_at(self._usable_wake(schedule, start), self._express_subscription,
                         subscription, label='bticn.subscribe')

    def lpn_publish(self, lpn: int, name: Name, payload: bytes = b'') -> bool:
        """Produce an item at an LPN; a pending long-lived Interest takes it at the next wake."""
        return self.ndn.put_data(lpn, Data(name, payload))

    # -- sleepy consumers -------------------------------------------------

    def lpn_request(self, lpn: int, name: Name, repeat_after_us: Optional[SimTime] = None,
                    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
                    on_complete: Optional[Callable[[LpnRequest], None]] = None) -> LpnRequest:
        """
        Request name from a sleepy consumer.

        Each attempt lives for the rest of the current awake window. A missed
        attempt is repeated at the first wake at or after attempt start +
        repeat_after_us (default one sleep cycle), up to max_attempts.
        """
        if lpn not in self.friends:
            raise FriendshipError(f"node {lpn} has no friend")
        schedule = self._schedule(lpn)
        if repeat_after_us is None:
            repeat_after_us = schedule.cycle_us
        request = LpnRequest(lpn, name, self.sim.now, repeat_after_us, max_attempts,
                             on_complete=on_complete)
        self.requests.append(request)
        self.sim.call_at(self._usable_wake(schedule, self.sim.now), self._lpn_attempt, request,
                         label='bticn.lpn_attempt')
        return request

    def _lpn_attempt(self, request: LpnRequest) -> None:
        now = self.sim.now
        schedule = self._schedule(request.lpn)
        friend = self.ndn.node(self.friends[request.lpn])

        request.attempts += 1
        request.last_attempt_at = now
        friend_had_copy = request.name in friend.cs

        def on_complete(handle: RequestHandle) -> None:
            self._on_lpn_response(request, handle, friend_had_copy)

        self.ndn.express_interest(request.lpn, request.name, on_complete=on_complete,
                                  lifetime_us=schedule.remaining_awake(now), max_retries=0)

    def _on_lpn_response(self, request: LpnRequest, handle: RequestHandle,
                         friend_had_copy: bool) -> None:
        now = self.sim.now
        if handle.satisfied:
            request.satisfied = True
            request.completed_at = now
            request.served_from_friend_cache = friend_had_copy or handle.from_local_cache
        elif request.attempts < request.max_attempts:
            schedule = self._schedule(request.lpn)
            retry_at = self._usable_wake(schedule, request.last_attempt_at + request.repeat_after_us)
            logger.debug("LPN %d missed %s, repeating at %d us", request.lpn, request.name, retry_at)
            self.sim.call_at(max(retry_at, now), self._lpn_attempt, request,
                             label='bticn.lpn_attempt')
            return
        else:
            request.failed = True
            request.completed_at = now
        if request.on_complete is not None:
            request.on_complete(request)
