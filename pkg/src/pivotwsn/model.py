"""Shared domain types: node identity, packet headers, and per-node protocol state.

Everything in this module is plain data.  Mutation happens only inside the
single-threaded simulation loop; packets themselves are frozen values that are
copied, never edited in place, when they move between nodes.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque

NodeId = int

PRIORITY_MIN = 0
PRIORITY_MAX = 3

#: Header priority given to control packets (floods, acks, hello/reply).
#: Control traffic never enters the data queues, so this only fills the field.
CONTROL_PRIORITY = PRIORITY_MAX


class NodeKind(Enum):
    SENSOR = "sensor"
    PIVOT = "pivot"
    SINK = "sink"


class TreeId(Enum):
    """The two gradient trees: HOP1 is sink-rooted, HOP2 is pivot-rooted."""

    HOP1 = "HOP1"
    HOP2 = "HOP2"


class PacketKind(Enum):
    SHOT_FLOOD = "SHOT_FLOOD"
    SUBSCRIBE = "SUBSCRIBE"
    REPORT = "REPORT"
    ACK = "ACK"
    HELLO = "HELLO"
    REPLY = "REPLY"


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: Position) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in meters, boundaries inclusive."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("region has negative extent")

    def contains(self, pos: Position) -> bool:
        return self.x_min <= pos.x <= self.x_max and self.y_min <= pos.y <= self.y_max

    def contains_region(self, other: Region) -> bool:
        return (
            self.x_min <= other.x_min
            and self.y_min <= other.y_min
            and other.x_max <= self.x_max
            and other.y_max <= self.y_max
        )


@dataclass(frozen=True)
class Interest:
    """A sink subscription: which attribute to report, from which region."""

    interest_id: int
    attribute: str
    region: Region
    sink: NodeId

    def __post_init__(self) -> None:
        if not self.attribute or any(c.isspace() for c in self.attribute):
            raise ValueError("interest attribute must be a non-empty token without whitespace")


@dataclass(frozen=True)
class SensedEvent:
    attribute: str
    value: float
    position: Position
    time: float


@dataclass(frozen=True)
class Packet:
    """One routable message.  Kind-specific attributes stay None when unused."""

    kind: PacketKind
    priority: int
    seq: int
    origin: NodeId
    sender: NodeId
    created_at: float
    hop_count: int = 0
    payload_size: int = 0
    interest_id: int | None = None
    # SHOT_FLOOD
    tree: TreeId | None = None
    shot_value: int | None = None
    # SUBSCRIBE
    interest: Interest | None = None
    # ACK: identity of the acknowledged packet
    ack_origin: NodeId | None = None
    ack_seq: int | None = None
    # REPLY: responder identity and its pivot-tree hop level (None if unset)
    reply_responder: NodeId | None = None
    reply_hop_level: int | None = None


class PacketFactory:
    """Allocates per-origin, strictly increasing sequence numbers.

    One factory per simulation run; sharing it across runs would leak counters
    and break the gap-free per-origin sequence property.
    """

    def __init__(self) -> None:
        self._counters: dict[NodeId, int] = {}

    def make_packet(
        self,
        kind: PacketKind,
        priority: int,
        origin: NodeId,
        now: float,
        **attrs,
    ) -> Packet:
        if not PRIORITY_MIN <= priority <= PRIORITY_MAX:
            raise ValueError(f"priority {priority} does not fit the 2-bit header field")
        seq = self._counters.get(origin, 0) + 1
        self._counters[origin] = seq
        return Packet(
            kind=kind,
            priority=priority,
            seq=seq,
            origin=origin,
            sender=origin,
            created_at=now,
            **attrs,
        )

    def last_seq(self, origin: NodeId) -> int:
        return self._counters.get(origin, 0)


def validate_header(p: Packet) -> str | None:
    """Return the first malformed header field name, or None if well formed."""
    if not PRIORITY_MIN <= p.priority <= PRIORITY_MAX:
        return "priority"
    if p.hop_count < 0:
        return "hop_count"
    if p.seq < 1:
        return "seq"
    return None


@dataclass
class HopLevels:
    """Hop distances (a: from the sink, b: from the nearest pivot).

    None means unset; levels only ever decrease while a tree is being flooded.
    The parent is the neighbor whose flood message was accepted.
    """

    a: int | None = None
    b: int | None = None
    parent_hop1: NodeId | None = None
    parent_hop2: NodeId | None = None

    def level(self, tree: TreeId) -> int | None:
        return self.a if tree is TreeId.HOP1 else self.b

    def set_level(self, tree: TreeId, value: int, parent: NodeId | None) -> None:
        if tree is TreeId.HOP1:
            self.a = value
            self.parent_hop1 = parent
        else:
            self.b = value
            self.parent_hop2 = parent

    def reset(self) -> None:
        self.a = None
        self.b = None
        self.parent_hop1 = None
        self.parent_hop2 = None


@dataclass
class RequirementEntry:
    """A stored interest plus the upstream neighbor it arrived from."""

    interest: Interest
    learned_from: NodeId


@dataclass
class RouteCandidate:
    neighbor: NodeId
    b_level: int
    installed_by_repair: bool = False


@dataclass
class RoutingTable:
    """Next-hop candidates toward the pivot plus the reverse subscription hop.

    neighbor_levels holds the latest pivot-tree level each usable neighbor has
    advertised (a flood message with value v means its sender sits at v-1).
    toward_pivot is the derived candidate list, sorted by (b_level, neighbor):
    the strictly-downhill neighbors plus any receivers installed by repair
    discovery, which are tagged because they may not descend.  Exhausted marks
    record next hops that timed out, per destination class.
    """

    neighbor_levels: dict[NodeId, int] = field(default_factory=dict)
    installed: dict[NodeId, int] = field(default_factory=dict)
    toward_pivot: list[RouteCandidate] = field(default_factory=list)
    toward_sink_reverse: NodeId | None = None
    exhausted_pivot: set[NodeId] = field(default_factory=set)
    exhausted_sink: set[NodeId] = field(default_factory=set)

    def refresh(self, own_b: int | None) -> None:
        """Rebuild toward_pivot from advertised levels and installed receivers."""
        candidates = {}
        if own_b is not None:
            for neighbor, level in self.neighbor_levels.items():
                if level < own_b:
                    candidates[neighbor] = RouteCandidate(neighbor, level)
        for neighbor, level in self.installed.items():
            candidates[neighbor] = RouteCandidate(neighbor, level, installed_by_repair=True)
        self.toward_pivot = sorted(candidates.values(), key=lambda c: (c.b_level, c.neighbor))

    def note_neighbor_level(self, neighbor: NodeId, level: int, own_b: int | None) -> None:
        self.neighbor_levels[neighbor] = level
        self.refresh(own_b)

    def install(self, neighbor: NodeId, level: int, own_b: int | None) -> None:
        self.installed[neighbor] = level
        self.refresh(own_b)

    def clear_exhausted(self, neighbor: NodeId) -> None:
        self.exhausted_pivot.discard(neighbor)
        self.exhausted_sink.discard(neighbor)

    def reset_tree_state(self) -> None:
        """Forget everything the pivot-tree flood taught us; a re-flood follows."""
        self.neighbor_levels.clear()
        self.installed.clear()
        self.toward_pivot = []
        self.exhausted_pivot.clear()
        self.exhausted_sink.clear()


@dataclass
class QueuePair:
    """The per-node two-queue model: one FIFO per traffic class."""

    rt: Deque[Packet] = field(default_factory=deque)
    nrt: Deque[Packet] = field(default_factory=deque)
    capacity: int = 64

    def clear(self) -> None:
        self.rt.clear()
        self.nrt.clear()


@dataclass
class PendingAck:
    """Timer state for one in-flight transmission awaiting its hop-level ack."""

    packet: Packet
    next_hop: NodeId
    deadline: float
    attempts: int = 1
    route: str = "gradient"
    #: Simulator-side custody marker: True when the transmission never reached
    #: the link (no arrival was scheduled), so this node still owns the packet.
    tx_lost: bool = False


@dataclass
class NodeState:
    """Everything one node knows, plus simulator bookkeeping for its radio.

    neighbors holds only bidirectional links (both endpoints in range of each
    other): those are the links the protocol can use, since every data hop
    must be acknowledged in the reverse direction.
    """

    id: NodeId
    kind: NodeKind
    position: Position
    tx_range: float
    neighbors: frozenset[NodeId] = frozenset()
    hop_levels: HopLevels = field(default_factory=HopLevels)
    requirement_table: list[RequirementEntry] = field(default_factory=list)
    routing_table: RoutingTable = field(default_factory=RoutingTable)
    queues: QueuePair = field(default_factory=QueuePair)
    pending_acks: dict[tuple[NodeId, int], PendingAck] = field(default_factory=dict)
    residual_energy: float = 0.0
    alive: bool = True
    # -- simulator bookkeeping below --
    tx_busy: bool = False
    in_service: object | None = None
    retx: Deque[object] = field(default_factory=deque)
    discovery: object | None = None

    def find_requirement(self, interest_id: int | None) -> RequirementEntry | None:
        for entry in self.requirement_table:
            if entry.interest.interest_id == interest_id:
                return entry
        return None

    def sorted_neighbors(self) -> list[NodeId]:
        return sorted(self.neighbors)


@dataclass(frozen=True)
class Outbound:
    """A packet addressed to one next hop, ready for the link layer."""

    to: NodeId
    packet: Packet
