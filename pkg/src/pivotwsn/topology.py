"""Random unit-disk deployments with asymmetric transmission ranges.

A directed link exists from u to v iff their distance is within u's range
(boundary inclusive).  Sensors have a short range; pivots and the sink carry
infrastructure radios with a long one, so pivot->sensor links are often
one-way.  The protocol itself only uses bidirectional ("mutual") links, which
are precomputed here alongside the raw directed set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .config import SINK_ID, ScenarioConfig
from .model import NodeId, NodeKind, Position


class TopologyError(RuntimeError):
    """No usable deployment found within the retry budget."""


@dataclass(frozen=True)
class TopoNode:
    id: NodeId
    kind: NodeKind
    position: Position
    tx_range: float


@dataclass
class Topology:
    nodes: list[TopoNode]
    seed_used: int = 0
    directed_links: set[tuple[NodeId, NodeId]] = field(init=False, default_factory=set)
    out_neighbors: dict[NodeId, list[NodeId]] = field(init=False, default_factory=dict)
    mutual: dict[NodeId, list[NodeId]] = field(init=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._derive_links()

    def _derive_links(self) -> None:
        self.directed_links = set()
        self.out_neighbors = {n.id: [] for n in self.nodes}
        self.mutual = {n.id: [] for n in self.nodes}
        for a in self.nodes:
            for b in self.nodes:
                if a.id == b.id:
                    continue
                if a.position.distance_to(b.position) <= a.tx_range:
                    self.directed_links.add((a.id, b.id))
                    self.out_neighbors[a.id].append(b.id)
        for a, b in self.directed_links:
            if a < b and (b, a) in self.directed_links:
                self.mutual[a].append(b)
                self.mutual[b].append(a)
        for neighbors in self.out_neighbors.values():
            neighbors.sort()
        for neighbors in self.mutual.values():
            neighbors.sort()

    def node(self, node_id: NodeId) -> TopoNode:
        return self.nodes[node_id]

    def has_link(self, sender: NodeId, receiver: NodeId) -> bool:
        return (sender, receiver) in self.directed_links

    def ids_of_kind(self, kind: NodeKind) -> list[NodeId]:
        return [n.id for n in self.nodes if n.kind is kind]

    def mutual_component(self, start: NodeId) -> set[NodeId]:
        seen = {start}
        stack = [start]
        while stack:
            for neighbor in self.mutual[stack.pop()]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    stack.append(neighbor)
        return seen


def _draw(cfg: ScenarioConfig, rng: random.Random) -> Topology:
    nodes: list[TopoNode] = []

    def place(kind: NodeKind, tx_range: float) -> None:
        pos = Position(rng.uniform(0.0, cfg.area_width), rng.uniform(0.0, cfg.area_height))
        nodes.append(TopoNode(id=len(nodes), kind=kind, position=pos, tx_range=tx_range))

    place(NodeKind.SINK, cfg.pivot_range)
    for _ in range(cfg.pivot_count):
        place(NodeKind.PIVOT, cfg.pivot_range)
    for _ in range(cfg.sensor_count):
        place(NodeKind.SENSOR, cfg.sensor_range)
    return Topology(nodes=nodes)


def _usable(topology: Topology) -> bool:
    """A deployment is usable when each pivot, and the sink, can hear sensors.

    Formally: every pivot's mutual-link component must contain at least one
    sensor, and so must the sink's.  Draws violating this cannot carry any
    report and are retried.
    """
    sensors = set(topology.ids_of_kind(NodeKind.SENSOR))
    for root in [SINK_ID] + topology.ids_of_kind(NodeKind.PIVOT):
        if not (topology.mutual_component(root) & sensors):
            return False
    return True


def derive_attempt_seed(seed: int, attempt: int) -> int:
    return seed + 1_000_003 * attempt


def generate_topology(cfg: ScenarioConfig, rng_seed: int) -> Topology:
    """Deterministic deployment for (cfg, seed), retrying degenerate draws."""
    cfg.check()
    for attempt in range(cfg.topology_retries):
        attempt_seed = derive_attempt_seed(rng_seed, attempt)
        topology = _draw(cfg, random.Random(attempt_seed))
        if _usable(topology):
            topology.seed_used = attempt_seed
            return topology
    raise TopologyError(
        f"no usable deployment for seed {rng_seed} within {cfg.topology_retries} retries"
    )
