"""
Unit and integration tests for the btmesh package.
"""

import pytest

from meshsim.btmesh import (
    FriendQueue,
    MeshAction,
    MeshAddress,
    MeshNetwork,
    MeshNetworkPdu,
    MeshParams,
    MessageCache,
)
from meshsim.btmesh.addresses import AddressKind
from meshsim.errors import ConfigError, FriendshipError, PayloadTooLargeError, ProtocolError
from meshsim.sim_core import MS, RadioMedium, SECOND, Simulator, TopologyMatrix

GROUP = MeshAddress.group(0)


def _mesh(topology, params=None, seed=1):
    """Mesh on a fixed scanner channel, so reception does not depend on scan phase."""
    sim = Simulator()
    medium = RadioMedium(sim, topology)
    mesh = MeshNetwork(sim, medium, params or MeshParams(), seed=seed, scan_window_us=None)
    return sim, medium, mesh


def _pdu(src_node=0, ttl=7, seq=1, dst=GROUP):
    return MeshNetworkPdu(MeshAddress.for_node(src_node), dst, ttl, seq)


@pytest.mark.unit
class TestMeshAddress:
    """Tests for address kinds and conversions."""

    def test_kinds(self):
        assert MeshAddress(0).kind is AddressKind.UNASSIGNED
        assert MeshAddress.for_node(0).kind is AddressKind.UNICAST
        assert MeshAddress(0x8000).kind is AddressKind.VIRTUAL
        assert GROUP.kind is AddressKind.GROUP

    def test_node_round_trip(self):
        address = MeshAddress.for_node(9)

        assert address.value == 10
        assert address.node == 9
        assert str(address) == "0x000a"

    def test_group_has_no_node(self):
        with pytest.raises(ConfigError):
            GROUP.node

    def test_out_of_range(self):
        with pytest.raises(ConfigError):
            MeshAddress(0x10000)
        with pytest.raises(ConfigError):
            MeshAddress.group(0x4000)


@pytest.mark.unit
class TestNetworkPdu:
    """Tests for PDU validation and relaying."""

    def test_length_and_key(self):
        pdu = MeshNetworkPdu(MeshAddress.for_node(2), GROUP, 5, 42, b'12345678')

        assert pdu.length_bytes == 8 + 14
        assert pdu.key == (3, 42)

    def test_relayed_decrements_ttl(self):
        assert _pdu(ttl=3).relayed().ttl == 2

    def test_ttl_one_not_relayable(self):
        with pytest.raises(ProtocolError):
            _pdu(ttl=1).relayed()

    @pytest.mark.parametrize("kwargs", [
        {"ttl": 128},
        {"ttl": -1},
        {"seq": 1 << 24},
    ])
    def test_invalid_fields(self, kwargs):
        with pytest.raises(ProtocolError):
            _pdu(**kwargs)

    def test_group_source_rejected(self):
        with pytest.raises(ProtocolError):
            MeshNetworkPdu(GROUP, GROUP, 5, 1)


@pytest.mark.unit
class TestMessageCache:
    """Tests for the bounded FIFO message cache."""

    def test_duplicate_detected(self):
        cache = MessageCache(4)

        assert cache.add((1, 1)) is True
        assert cache.add((1, 1)) is False
        assert (1, 1) in cache

    def test_oldest_evicted(self):
        cache = MessageCache(2)
        for key in [(1, 1), (1, 2), (1, 3)]:
            cache.add(key)

        assert (1, 1) not in cache
        assert len(cache) == 2
        assert cache.evictions == 1

    def test_capacity_must_be_positive(self):
        with pytest.raises(ProtocolError):
            MessageCache(0)


@pytest.mark.unit
class TestFriendQueue:
    """Tests for the per-LPN friend queue."""

    def test_bounded_fifo(self):
        queue = FriendQueue(friend=0, lpn=1, capacity=2)
        for seq in (1, 2, 3):
            queue.append(_pdu(seq=seq))

        assert queue.evicted == 1
        assert [p.seq for p in queue.drain()] == [2, 3]
        assert len(queue) == 0

    def test_capacity_must_be_positive(self):
        with pytest.raises(ProtocolError):
            FriendQueue(0, 1, capacity=0)


@pytest.mark.unit
class TestOnMeshFrame:
    """Tests for network-layer relay and delivery decisions."""

    def test_relay_then_drop_duplicate(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))
        pdu = _pdu(src_node=0)

        assert mesh.on_mesh_frame(1, pdu) is MeshAction.RELAYED
        assert mesh.on_mesh_frame(1, pdu) is MeshAction.DROPPED

    def test_subscribed_delivers_and_relays(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))
        mesh.subscribe(1, GROUP)

        assert mesh.on_mesh_frame(1, _pdu(ttl=7)) is MeshAction.BOTH
        assert mesh.on_mesh_frame(1, _pdu(ttl=1, seq=2)) is MeshAction.DELIVERED
        assert [d.seq for d in mesh.deliveries] == [1, 2]

    def test_ttl_one_not_relayed(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))

        assert mesh.on_mesh_frame(1, _pdu(ttl=1)) is MeshAction.DROPPED

    def test_own_pdu_not_relayed(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))

        assert mesh.on_mesh_frame(1, _pdu(src_node=1)) is MeshAction.DROPPED

    def test_relay_disabled(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2), MeshParams(relay=False))

        assert mesh.on_mesh_frame(1, _pdu()) is MeshAction.DROPPED


@pytest.mark.unit
class TestPublish:
    """Tests for publishing and the advertising bearer."""

    def test_payload_too_large(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))

        with pytest.raises(PayloadTooLargeError):
            mesh.publish(0, GROUP, b'x' * 12)

    def test_sequence_numbers_increase(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(2))
        first = mesh.publish(0, GROUP)
        second = mesh.publish(0, GROUP)

        assert (first.seq, second.seq) == (1, 2)
        assert mesh.publish_time(first) == sim.now

    def test_bearer_serves_one_pdu_at_a_time_local_first(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(2))
        mesh.subscribe(0, GROUP)
        mesh.node(0).relay_enabled = False
        mesh.advertise(1, _pdu(src_node=2, seq=1))
        mesh.advertise(1, _pdu(src_node=2, seq=2))
        mesh.publish(1, GROUP)

        assert mesh.node(1).bearer_backlog == 2
        sim.run_until_idle(10 * SECOND)

        arrivals = [(d.src_node, d.seq, d.time) for d in mesh.deliveries if d.node == 0]
        assert [(src, seq) for src, seq, _ in arrivals] == [(2, 1), (1, 1), (2, 2)]
        assert arrivals[0][2] < 100 * MS
        assert 100 * MS <= arrivals[1][2] < 200 * MS
        assert 200 * MS <= arrivals[2][2] < 300 * MS
        assert mesh.node(1).bearer_backlog == 0

    def test_advertising_frames_per_item(self):
        """Each advertising node sends 5 events x 3 channels; only the first is original."""
        items = 3
        sim, medium, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.subscribe(1, GROUP)
        mesh.subscribe(2, GROUP)
        for k in range(items):
            sim.call_at(k * 500 * MS, mesh.publish, 0, GROUP, b'', label='test.publish')

        sim.run_until_idle(10 * SECOND)

        for node in range(3):
            tally = medium.tallies[node]
            assert tally.tx_total == 15 * items
            assert tally.tx_original == items
        assert sorted((d.node, d.seq) for d in mesh.deliveries) == [
            (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]

    def test_ttl_limits_reach_on_line(self):
        sim, _, mesh = _mesh(TopologyMatrix.line(4), MeshParams(initial_ttl=2))
        for v in (1, 2, 3):
            mesh.subscribe(v, GROUP)
        mesh.publish(0, GROUP)

        sim.run_until_idle(10 * SECOND)

        assert sorted(d.node for d in mesh.deliveries) == [1, 2]
        assert mesh.node(2).relayed == 0

    def test_acknowledged_message_gets_reply(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(2))
        mesh.node(1).responder = lambda pdu: b'pong'
        mesh.publish(0, MeshAddress.for_node(1), b'ping', ack_required=True)

        sim.run_until_idle(10 * SECOND)

        replies = [d for d in mesh.deliveries if d.node == 0]
        assert len(replies) == 1
        assert replies[0].src_node == 1
        assert replies[0].pdu.payload == b'pong'

    def test_reply_requires_ack_flag(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(2))

        with pytest.raises(ProtocolError):
            mesh.send_ack_reply(1, _pdu())


@pytest.mark.integration
class TestFriendship:
    """Tests for friend queues and LPN polling."""

    def test_queued_while_asleep_delivered_on_poll(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.subscribe(1, GROUP)
        mesh.establish_friendship(0, 1)
        mesh.publish(2, GROUP, b'item')

        sim.run_until_idle(10 * SECOND)

        assert [d for d in mesh.deliveries if d.node == 1] == []
        assert len(mesh.friend_queue(1)) == 1

        outcome = mesh.lpn_poll(1)
        sim.run_until_idle(20 * SECOND)

        assert outcome.answered
        assert outcome.served == 1
        assert [(p.src.node, p.seq) for p in outcome.received] == [(2, 1)]
        lpn_deliveries = [d for d in mesh.deliveries if d.node == 1]
        assert [(d.src_node, d.seq) for d in lpn_deliveries] == [(2, 1)]
        assert len(mesh.friend_queue(1)) == 0
        assert mesh.node(1).asleep

    def test_lost_poll_keeps_queue(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.subscribe(1, GROUP)
        mesh.establish_friendship(0, 1)
        mesh.publish(2, GROUP, b'item')
        sim.run_until_idle(10 * SECOND)

        mesh.node(0).radio.enabled = False
        lost = mesh.lpn_poll(1)
        sim.run_until_idle(20 * SECOND)

        assert not lost.answered
        assert lost.received_count == 0
        assert lost.closed_at == lost.polled_at + 40 * MS
        assert len(mesh.friend_queue(1)) == 1
        assert mesh.node(1).asleep
        assert [d for d in mesh.deliveries if d.node == 1] == []

        mesh.node(0).radio.enabled = True
        again = mesh.lpn_poll(1)
        sim.run_until_idle(30 * SECOND)

        assert again.answered
        assert again.received_count == 1
        assert len(mesh.friend_queue(1)) == 0

    def test_poll_delivers_several_in_order(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.subscribe(1, GROUP)
        mesh.establish_friendship(0, 1)
        for k in range(3):
            sim.call_at(k * SECOND, mesh.publish, 2, GROUP, b'', label='test.publish')
        sim.run_until_idle(10 * SECOND)

        outcome = mesh.lpn_poll(1)
        sim.run_until_idle(20 * SECOND)

        assert outcome.served == 3
        assert [p.seq for p in outcome.received] == [1, 2, 3]
        assert mesh.node(1).asleep

    def test_lpn_does_not_relay(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.establish_friendship(0, 1)

        assert mesh.node(1).relay_enabled is False

    def test_unsubscribed_traffic_not_queued(self):
        sim, _, mesh = _mesh(TopologyMatrix.full_mesh(3))
        mesh.establish_friendship(0, 1)
        mesh.publish(2, GROUP)

        sim.run_until_idle(10 * SECOND)

        assert len(mesh.friend_queue(1)) == 0

    def test_friendship_errors(self):
        _, _, mesh = _mesh(TopologyMatrix.full_mesh(3))

        with pytest.raises(FriendshipError):
            mesh.establish_friendship(1, 1)
        mesh.establish_friendship(0, 1)
        with pytest.raises(FriendshipError):
            mesh.establish_friendship(2, 1)
        with pytest.raises(FriendshipError):
            mesh.lpn_poll(2)
        with pytest.raises(FriendshipError):
            mesh.friend_queue(2)
        with pytest.raises(FriendshipError):
            mesh.friend_enqueue(2, 1, _pdu())
