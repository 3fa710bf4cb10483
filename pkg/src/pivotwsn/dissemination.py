"""Interest subscription and report routing.

The sink floods its interest; every node stores it together with the neighbor
it arrived from, giving a reverse path back to the sink.  Sensed events are
matched against the stored interests; matching reports travel hop by hop down
the pivot gradient (strictly decreasing b level), and the pivot hands them to
the sink in a single hop.  When the gradient offers no usable next hop the
reverse subscription path is tried, and failing that the caller falls back to
hello/reply discovery in path_repair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    CONTROL_PRIORITY,
    Interest,
    NodeId,
    NodeKind,
    NodeState,
    Outbound,
    Packet,
    PacketFactory,
    PacketKind,
    Region,
    RequirementEntry,
    SensedEvent,
)

#: How a next hop was chosen; forwarded packets carry this in the trace so the
#: checker applies the strictly-downhill rule only to gradient hops.
ROUTE_GRADIENT = "gradient"
ROUTE_REVERSE = "reverse"
ROUTE_REPAIR = "repair"
ROUTE_DIRECT = "direct"


def propagate_subscription(
    sink: NodeState,
    interest: Interest,
    deployment: Region,
    factory: PacketFactory,
    now: float,
) -> list[Outbound]:
    """Start the interest flood at the sink; returns the first wave of packets."""
    if sink.kind is not NodeKind.SINK:
        raise ValueError(f"node {sink.id} is not a sink")
    if sink.hop_levels.a != 0:
        raise ValueError("hop trees must be built before subscribing")
    if not deployment.contains_region(interest.region):
        raise ValueError(f"interest {interest.interest_id} region lies outside the deployment area")
    return [
        Outbound(
            to=neighbor,
            packet=factory.make_packet(
                PacketKind.SUBSCRIBE,
                CONTROL_PRIORITY,
                sink.id,
                now,
                interest_id=interest.interest_id,
                interest=interest,
            ),
        )
        for neighbor in sink.sorted_neighbors()
    ]


@dataclass
class SubscribeResult:
    stored: bool
    forwards: list[Outbound] = field(default_factory=list)


def on_subscribe(
    node: NodeState, p: Packet, factory: PacketFactory, now: float
) -> SubscribeResult:
    """Store an unseen interest and re-flood it; duplicates die here."""
    interest = p.interest
    if interest is None:
        raise ValueError("subscribe packet without an interest")
    if node.id == interest.sink or p.sender not in node.neighbors:
        return SubscribeResult(stored=False)
    if node.find_requirement(interest.interest_id) is not None:
        return SubscribeResult(stored=False)
    node.requirement_table.append(RequirementEntry(interest=interest, learned_from=p.sender))
    if node.routing_table.toward_sink_reverse is None:
        node.routing_table.toward_sink_reverse = p.sender
    forwards = [
        Outbound(
            to=neighbor,
            packet=factory.make_packet(
                PacketKind.SUBSCRIBE,
                CONTROL_PRIORITY,
                node.id,
                now,
                interest_id=interest.interest_id,
                interest=interest,
            ),
        )
        for neighbor in node.sorted_neighbors()
        if neighbor != p.sender
    ]
    return SubscribeResult(stored=True, forwards=forwards)


def on_sense(
    node: NodeState,
    ev: SensedEvent,
    now: float,
    factory: PacketFactory,
    priority: int,
) -> Packet | None:
    """Create a report iff some stored interest matches the sensed event."""
    if node.kind is not NodeKind.SENSOR:
        raise ValueError(f"node {node.id} is not a sensor")
    for entry in node.requirement_table:
        interest = entry.interest
        if interest.attribute == ev.attribute and interest.region.contains(ev.position):
            return factory.make_packet(
                PacketKind.REPORT, priority, node.id, now, interest_id=interest.interest_id
            )
    return None


@dataclass(frozen=True)
class NextHop:
    node_id: NodeId
    route: str


def next_hop_for_report(node: NodeState, p: Packet) -> NextHop | None:
    """Pick the next hop for a report, or None when discovery must run.

    Sensors prefer the lowest-b (then lowest-id) gradient candidate that has
    not been marked exhausted by an ack timeout; candidates learned through
    repair are usable even when the node's own level is stale or unset.  The
    reverse subscription hop is the fallback.  Pivots go straight to the sink
    of the report's interest.  Liveness of a neighbor is a belief here, not
    ground truth: dead next hops are found out by the ack timer.

    A packet is never handed back to the neighbor it arrived from: after a
    failure the stale gradient can point a repaired node and its upstream at
    each other, and the no-return rule is what breaks that cycle.
    """
    table = node.routing_table
    if node.kind is NodeKind.PIVOT:
        entry = node.find_requirement(p.interest_id)
        if entry is not None and entry.interest.sink in node.neighbors:
            return NextHop(entry.interest.sink, ROUTE_DIRECT)
        return None
    arrived_from = p.sender if p.sender != node.id else None
    own_b = node.hop_levels.b
    for cand in table.toward_pivot:
        if cand.neighbor in table.exhausted_pivot or cand.neighbor == arrived_from:
            continue
        if cand.installed_by_repair:
            return NextHop(cand.neighbor, ROUTE_REPAIR)
        if own_b is not None and cand.b_level < own_b:
            return NextHop(cand.neighbor, ROUTE_GRADIENT)
    entry = node.find_requirement(p.interest_id)
    reverse = entry.learned_from if entry is not None else table.toward_sink_reverse
    if reverse is not None and reverse not in table.exhausted_sink and reverse != arrived_from:
        return NextHop(reverse, ROUTE_REVERSE)
    return None


DISPOSITION_DELIVER = "deliver"
DISPOSITION_FORWARD = "forward"
DISPOSITION_DROP_UNKNOWN = "drop_unknown_interest"


def report_disposition(node: NodeState, p: Packet) -> str:
    """What a node does with an incoming report (the ack is sent regardless)."""
    if node.kind is NodeKind.SINK:
        return DISPOSITION_DELIVER
    if node.find_requirement(p.interest_id) is None:
        return DISPOSITION_DROP_UNKNOWN
    return DISPOSITION_FORWARD
