"""In-memory sensor network that stores share envelopes.

Nodes fail (unreachable for everyone, data kept) or get captured (the
adversary copies their store; the owner can still read them). Everything
is single-threaded and driven in call order, so identical calls give
identical reports.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .addressing import sensor_sequence
from .codec import COMPOSITE, ShareEnvelope
from .composite import CompositeKey
from .pipeline import Unrecoverable, join_data

__all__ = [
    "CAPTURED",
    "FAILED",
    "UP",
    "Network",
    "SensorNode",
    "SimReport",
    "UnknownGroup",
    "UnknownNode",
    "adversary_report",
    "capture_key",
    "capture_node",
    "collect_and_reconstruct",
    "fail_node",
    "new_network",
    "scatter",
]

UP = "up"
FAILED = "failed"
CAPTURED = "captured"


class UnknownNode(KeyError):
    pass


class UnknownGroup(KeyError):
    pass


@dataclass
class SensorNode:
    id: int
    status: str = UP
    store: dict[tuple[bytes, int], ShareEnvelope] = field(default_factory=dict)


@dataclass
class _Group:
    scheme: int
    k: int
    n: int
    placement: dict[int, int]
    key_captured: bool = False


@dataclass
class Network:
    seed: bytes
    nodes: list[SensorNode]
    groups: dict[bytes, _Group] = field(default_factory=dict)
    adversary: dict[tuple[bytes, int], ShareEnvelope] = field(default_factory=dict)
    captured: set[int] = field(default_factory=set)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> SensorNode:
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNode(node_id)
        return self.nodes[node_id]

    def group(self, group_id: bytes) -> _Group:
        try:
            return self.groups[group_id]
        except KeyError:
            raise UnknownGroup(group_id.hex()) from None

    def loads(self) -> list[int]:
        """Number of stored envelopes per node."""
        return [len(n.store) for n in self.nodes]

    def fingerprint(self) -> str:
        h = hashlib.sha256(self.seed)
        h.update(len(self.nodes).to_bytes(8, "big"))
        for n in self.nodes:
            h.update(f"{n.id}:{n.status}:{len(n.store)};".encode())
        return h.hexdigest()


@dataclass(frozen=True)
class SimReport:
    stored: int
    retrievable: bool
    shares_available: int
    shares_needed: int
    adversary_shares: int
    adversary_learns_data: bool

    def lines(self) -> list[str]:
        return [
            f"stored={self.stored}",
            f"retrievable={str(self.retrievable).lower()}",
            f"shares_available={self.shares_available}",
            f"shares_needed={self.shares_needed}",
            f"adversary_shares={self.adversary_shares}",
            f"adversary_learns_data={str(self.adversary_learns_data).lower()}",
        ]


def new_network(size: int, seed: bytes) -> Network:
    if size < 1:
        raise ValueError("a network needs at least one node")
    return Network(seed, [SensorNode(i) for i in range(size)])


def scatter(net: Network, group_id: bytes, envelopes: list[ShareEnvelope], seed: bytes) -> dict[int, int]:
    """Store envelope j on the j-th node of the seeded sequence; returns share_index -> node id."""
    if not envelopes:
        raise ValueError("nothing to store")
    if any(e.group_id != group_id for e in envelopes):
        raise ValueError("envelope does not belong to this group")
    nodes = sensor_sequence(seed, len(envelopes), net.size)
    placement = {}
    for env, node_id in zip(envelopes, nodes):
        net.nodes[node_id].store[(group_id, env.share_index)] = env
        if node_id in net.captured:
            net.adversary[(group_id, env.share_index)] = env
        placement[env.share_index] = node_id
    first = envelopes[0]
    net.groups[group_id] = _Group(first.scheme, first.k, first.n, placement)
    return placement


def fail_node(net: Network, node_id: int) -> Network:
    net.node(node_id).status = FAILED
    return net


def capture_node(net: Network, node_id: int) -> Network:
    """Copy the node's store into the adversary view.

    A failed node can be captured too; it stays unreachable for the owner.
    Shares stored on a captured node later also reach the adversary.
    """
    node = net.node(node_id)
    if node.status == UP:
        node.status = CAPTURED
    net.captured.add(node_id)
    net.adversary.update(node.store)
    return net


def capture_key(net: Network, group_id: bytes) -> Network:
    """Mark the composite key of a group as known to the adversary."""
    net.group(group_id).key_captured = True
    return net


def _reachable(net: Network, group_id: bytes) -> list[ShareEnvelope]:
    found = {}
    for node in net.nodes:
        if node.status == FAILED:
            continue
        for (gid, idx), env in node.store.items():
            if gid == group_id:
                found.setdefault(idx, env)
    return [found[i] for i in sorted(found)]


def collect_and_reconstruct(net: Network, group_id: bytes, key: CompositeKey | None = None) -> bytes:
    group = net.group(group_id)
    envs = _reachable(net, group_id)
    if len(envs) < group.k:
        raise Unrecoverable(len(envs), group.k)
    return join_data(envs, key)


def adversary_report(net: Network, group_id: bytes) -> SimReport:
    group = net.group(group_id)
    available = len(_reachable(net, group_id))
    captured = len({idx for gid, idx in net.adversary if gid == group_id})
    learns = captured >= group.k
    if group.scheme == COMPOSITE:
        learns = learns and group.key_captured
    return SimReport(
        stored=len(group.placement),
        retrievable=available >= group.k,
        shares_available=available,
        shares_needed=group.k,
        adversary_shares=captured,
        adversary_learns_data=learns,
    )

