"""Ack-timer supervision and alternate-path repair for forwarded reports.

Every data transmission registers a timer keyed by (origin, seq).  An ack from
the next hop cancels it; expiry marks that next hop exhausted and either
reroutes the retained packet to another routing-table candidate, or broadcasts
a hello and elects the replying neighbor with the least hop level as the new
receiver.  A bounded number of attempts caps the effort per packet per node.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    CONTROL_PRIORITY,
    NodeId,
    NodeKind,
    NodeState,
    Packet,
    PacketFactory,
    PacketKind,
    PendingAck,
)
from .dissemination import ROUTE_REVERSE, next_hop_for_report


@dataclass(frozen=True)
class ReplyInfo:
    responder: NodeId
    hop_level: int | None


def on_send(
    node: NodeState,
    p: Packet,
    next_hop: NodeId,
    now: float,
    ack_timeout: float,
    route: str,
    attempts: int = 1,
) -> PendingAck:
    """Register the ack timer for a transmission; re-registration replaces."""
    if next_hop not in node.neighbors:
        raise ValueError(f"node {node.id} cannot send to non-neighbor {next_hop}")
    pending = PendingAck(
        packet=p,
        next_hop=next_hop,
        deadline=now + ack_timeout,
        attempts=attempts,
        route=route,
    )
    node.pending_acks[(p.origin, p.seq)] = pending
    return pending


def on_ack(node: NodeState, origin: NodeId, seq: int) -> bool:
    """Cancel the matching timer; unknown acks (duplicate or late) return False."""
    return node.pending_acks.pop((origin, seq), None) is not None


@dataclass(frozen=True)
class RepairDecision:
    action: str  # "reroute" | "discover" | "drop"
    new_next_hop: NodeId | None = None
    new_route: str | None = None


def on_timeout(node: NodeState, pending: PendingAck, now: float, max_attempts: int) -> RepairDecision:
    """Resolve an expired ack timer.

    The failed next hop is marked exhausted for its destination before looking
    for an alternate, so the same candidate is never chosen twice in a row.
    """
    node.pending_acks.pop((pending.packet.origin, pending.packet.seq), None)
    if pending.route == ROUTE_REVERSE:
        node.routing_table.exhausted_sink.add(pending.next_hop)
    else:
        node.routing_table.exhausted_pivot.add(pending.next_hop)
    if pending.attempts >= max_attempts:
        return RepairDecision(action="drop")
    alternate = next_hop_for_report(node, pending.packet)
    if alternate is not None:
        return RepairDecision(action="reroute", new_next_hop=alternate.node_id, new_route=alternate.route)
    return RepairDecision(action="discover")


def make_hello(node: NodeState, factory: PacketFactory, now: float) -> Packet:
    return factory.make_packet(PacketKind.HELLO, CONTROL_PRIORITY, node.id, now)


def _has_escape_besides(node: NodeState, asker: NodeId) -> bool:
    """Whether this node could forward the asker's packets somewhere else.

    Split horizon: a responder whose only usable routes lead back through the
    asker must not advertise a hop level, or the asker would elect a receiver
    that bounces its packets straight back.
    """
    if node.kind is not NodeKind.SENSOR:
        return True  # pivots relay straight to the sink; the sink consumes
    table = node.routing_table
    for cand in table.toward_pivot:
        if cand.neighbor != asker and cand.neighbor not in table.exhausted_pivot:
            return True
    reverse = table.toward_sink_reverse
    return reverse is not None and reverse != asker and reverse not in table.exhausted_sink


def on_hello(node: NodeState, factory: PacketFactory, now: float, asker: NodeId) -> Packet:
    """Answer a hello with this node's id and pivot-tree hop level.

    The level is withheld (sent as absent) when it is unset or when every
    usable route out of this node runs through the asker itself.
    """
    level = node.hop_levels.b
    if level is not None and not _has_escape_besides(node, asker):
        level = None
    return factory.make_packet(
        PacketKind.REPLY,
        CONTROL_PRIORITY,
        node.id,
        now,
        reply_responder=node.id,
        reply_hop_level=level,
    )


def select_new_receiver(replies: list[ReplyInfo]) -> NodeId | None:
    """The responder with the least hop level; ties break to the lowest id."""
    usable = [r for r in replies if r.hop_level is not None]
    if not usable:
        return None
    best = min(usable, key=lambda r: (r.hop_level, r.responder))
    return best.responder


def install_receiver(node: NodeState, receiver: NodeId, hop_level: int) -> None:
    """Record a discovered receiver in the routing table for future packets."""
    node.routing_table.install(receiver, hop_level, node.hop_levels.b)
    node.routing_table.clear_exhausted(receiver)
