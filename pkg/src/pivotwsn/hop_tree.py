"""Gradient-tree construction by flooding, with a BFS oracle for verification.

Each tree root (the sink for HOP1, every pivot for HOP2) floods a hop counter
outward.  A node keeps the minimum value it has accepted, records the sender
as its parent, and re-floods the incremented value; anything not strictly
lower than the stored level is rejected, which both suppresses loops and
terminates the flood.  Flood messages are only accepted from bidirectional
neighbors: a parent the node cannot transmit to would be useless as a next
hop, and the per-hop ack discipline could never confirm deliveries to it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .model import (
    CONTROL_PRIORITY,
    NodeId,
    NodeKind,
    NodeState,
    Outbound,
    PacketFactory,
    PacketKind,
    TreeId,
)


@dataclass(frozen=True)
class ShotValue:
    tree: TreeId
    value: int


@dataclass
class ShotResult:
    accepted: bool
    new_level: int | None = None
    forwards: list[Outbound] = field(default_factory=list)
    reject_reason: str | None = None


_ROOT_KIND = {TreeId.HOP1: NodeKind.SINK, TreeId.HOP2: NodeKind.PIVOT}


def init_flood(
    root: NodeState, tree: TreeId, factory: PacketFactory, now: float
) -> list[Outbound]:
    """Seed a tree at its root: store level 0 and emit value 1 to each neighbor."""
    if root.kind is not _ROOT_KIND[tree]:
        raise ValueError(f"{root.kind.value} node {root.id} cannot root tree {tree.value}")
    root.hop_levels.set_level(tree, 0, parent=None)
    return [
        Outbound(
            to=neighbor,
            packet=factory.make_packet(
                PacketKind.SHOT_FLOOD, CONTROL_PRIORITY, root.id, now, tree=tree, shot_value=1
            ),
        )
        for neighbor in root.sorted_neighbors()
    ]


def on_shot(
    node: NodeState,
    msg: ShotValue,
    from_id: NodeId,
    factory: PacketFactory,
    now: float,
) -> ShotResult:
    """Accept a flood value iff strictly lower than the stored level.

    On acceptance the node stores the value, adopts the sender as parent, and
    re-floods value+1 to every neighbor except the sender.
    """
    if msg.value < 1:
        raise ValueError("flood value below 1 can only originate at a root")
    if from_id not in node.neighbors:
        return ShotResult(accepted=False, reject_reason="one_way_link")
    saved = node.hop_levels.level(msg.tree)
    if saved is not None and msg.value >= saved:
        return ShotResult(accepted=False, reject_reason="not_lower")
    node.hop_levels.set_level(msg.tree, msg.value, parent=from_id)
    forwards = [
        Outbound(
            to=neighbor,
            packet=factory.make_packet(
                PacketKind.SHOT_FLOOD,
                CONTROL_PRIORITY,
                node.id,
                now,
                tree=msg.tree,
                shot_value=msg.value + 1,
            ),
        )
        for neighbor in node.sorted_neighbors()
        if neighbor != from_id
    ]
    return ShotResult(accepted=True, new_level=msg.value, forwards=forwards)


def bfs_oracle(topology, root: NodeId) -> dict[NodeId, int | None]:
    """Exact hop distances from ``root`` over the topology's usable links.

    Independent of the flood implementation: a plain breadth-first search on
    the bidirectional-link graph.  Unreachable nodes map to None.
    """
    dist: dict[NodeId, int | None] = {n.id: None for n in topology.nodes}
    dist[root] = 0
    frontier = deque([root])
    while frontier:
        current = frontier.popleft()
        for neighbor in topology.mutual[current]:
            if dist[neighbor] is None:
                dist[neighbor] = dist[current] + 1  # type: ignore[operator]
                frontier.append(neighbor)
    return dist
