"""Deterministic discrete-event simulator driving the protocol modules.

One strictly single-threaded event loop owns every NodeState.  Events are
processed in (time, rank, tie) order where the tie counter is assigned at
scheduling time; timer expirations carry a higher rank so that, at equal
timestamps, message arrivals are seen before the deadline that waits on them
(ack timeouts and reply windows are inclusive of their boundary).

The link layer is directed by sender range and loss is silent: transmitting
to a dead or out-of-range receiver simply schedules nothing, which is exactly
what the ack timers exist to detect.  Data packets (reports) pass through the
per-node two-queue model and serialize on the node's single transmitter for
``service_time`` each; control packets (floods, subscriptions, acks, hello,
reply) bypass the queues and cost only the per-hop delay, so repair can never
deadlock behind congestion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from heapq import heappop, heappush
from itertools import count

from .config import SINK_ID, FailureAction, ScenarioConfig
from .dissemination import (
    DISPOSITION_DELIVER,
    DISPOSITION_DROP_UNKNOWN,
    ROUTE_GRADIENT,
    ROUTE_REPAIR,
    NextHop,
    next_hop_for_report,
    on_sense,
    on_subscribe,
    propagate_subscription,
    report_disposition,
)
from .hop_tree import ShotValue, init_flood, on_shot
from .metrics import Metrics
from .model import (
    CONTROL_PRIORITY,
    NodeId,
    NodeKind,
    NodeState,
    Outbound,
    Packet,
    PacketFactory,
    PacketKind,
    QueuePair,
    SensedEvent,
    TreeId,
)
from .path_repair import (
    ReplyInfo,
    install_receiver,
    make_hello,
    on_ack,
    on_hello,
    on_send,
    on_timeout,
    select_new_receiver,
)
from .qos_queue import TrafficClass, classify, dequeue, dequeue_fair, enqueue
from .topology import Topology, generate_topology
from .trace import TraceLog, packet_record, plain_record
from .traffic import SenseSpec, generate_traffic, plan_failures

#: At equal timestamps, deliveries and sensings run before timer expirations.
TIMER_RANK = 1

#: Seed offsets keeping the traffic/failure streams apart from topology draws.
TRAFFIC_SEED_OFFSET = 500_009
FAILURE_SEED_OFFSET = 900_007


class SimulationError(RuntimeError):
    """The run left its safety envelope (event budget, causality violation)."""


@dataclass
class ServiceItem:
    """A report waiting for, or occupying, a node's transmitter."""

    packet: Packet
    attempts: int = 1
    forced_next_hop: NodeId | None = None
    forced_route: str | None = None


@dataclass
class DiscoveryState:
    """An open hello/reply collection window and the packets parked on it."""

    waiting: list[ServiceItem] = field(default_factory=list)
    replies: list[ReplyInfo] = field(default_factory=list)


# -- event bodies -----------------------------------------------------------


@dataclass(frozen=True)
class Arrival:
    to: NodeId
    packet: Packet


@dataclass(frozen=True)
class TxComplete:
    node: NodeId
    token: object


@dataclass(frozen=True)
class AckTimeout:
    node: NodeId
    origin: NodeId
    seq: int
    token: object


@dataclass(frozen=True)
class WindowClose:
    node: NodeId
    token: object


@dataclass(frozen=True)
class SenseFire:
    node: NodeId
    spec: SenseSpec


@dataclass(frozen=True)
class NodeDownEv:
    node: NodeId


@dataclass(frozen=True)
class NodeUpEv:
    node: NodeId


@dataclass(frozen=True)
class TreeRefresh:
    pass


@dataclass
class RunResult:
    metrics: Metrics
    trace_lines: list[str]
    topology: Topology
    config: ScenarioConfig


class Simulator:
    def __init__(self, cfg: ScenarioConfig, topology: Topology | None = None) -> None:
        cfg.check()
        self.cfg = cfg
        self.topology = topology if topology is not None else generate_topology(cfg, cfg.seed)
        self.nodes: dict[NodeId, NodeState] = {}
        for tn in self.topology.nodes:
            self.nodes[tn.id] = NodeState(
                id=tn.id,
                kind=tn.kind,
                position=tn.position,
                tx_range=tn.tx_range,
                neighbors=frozenset(self.topology.mutual[tn.id]),
                queues=QueuePair(capacity=cfg.queue_capacity),
                residual_energy=cfg.initial_energy,
            )
        self.factory = PacketFactory()
        self.trace = TraceLog()
        self.metrics = Metrics()
        self.now = 0.0
        self._heap: list[tuple[float, int, int, object]] = []
        self._tie = count()
        self._events_processed = 0
        self._delivered_seen: set[tuple[NodeId, int]] = set()
        self._last_served: dict[NodeId, TrafficClass | None] = {}
        self._hop_limit = cfg.effective_hop_limit()

    # -- scheduling -----------------------------------------------------

    def _schedule(self, at: float, body: object, rank: int = 0) -> None:
        if at < self.now:
            raise SimulationError(f"event scheduled in the past ({at:.6f} < {self.now:.6f})")
        heappush(self._heap, (at, rank, next(self._tie), body))

    def _drain(self) -> None:
        while self._heap:
            self._events_processed += 1
            if self._events_processed > self.cfg.max_events:
                raise SimulationError(
                    f"event budget of {self.cfg.max_events} exceeded at t={self.now:.6f}; "
                    "likely a non-quiescent flood or a routing loop"
                )
            at, _rank, _tie, body = heappop(self._heap)
            self.now = at
            self._dispatch(body)

    def _dispatch(self, body: object) -> None:
        if isinstance(body, Arrival):
            self._on_arrival(body)
        elif isinstance(body, TxComplete):
            self._on_tx_complete(body)
        elif isinstance(body, AckTimeout):
            self._on_ack_timeout(body)
        elif isinstance(body, WindowClose):
            self._on_window_close(body)
        elif isinstance(body, SenseFire):
            self._on_sense_fire(body)
        elif isinstance(body, NodeDownEv):
            self._on_node_down(body.node)
        elif isinstance(body, NodeUpEv):
            self._on_node_up(body.node)
        elif isinstance(body, TreeRefresh):
            self._refresh_trees()
        else:  # pragma: no cover - development guard
            raise SimulationError(f"unknown event body {body!r}")

    # -- link layer -----------------------------------------------------

    def _deliver(self, sender: NodeState, to_id: NodeId, packet: Packet) -> bool:
        """Transmit over the directed link; returns False on silent loss."""
        if not sender.alive:
            return False
        if not self.topology.has_link(sender.id, to_id):
            return False
        if not self.nodes[to_id].alive:
            return False
        sender.residual_energy -= self.cfg.tx_cost
        self.metrics.note_transmission(sender.id, self.cfg.tx_cost)
        self._schedule(
            self.now + self.cfg.per_hop_delay,
            Arrival(to=to_id, packet=replace(packet, sender=sender.id)),
        )
        return True

    # -- setup phases -----------------------------------------------------

    def _start_floods(self) -> None:
        sink = self.nodes[SINK_ID]
        if sink.alive:
            for out in init_flood(sink, TreeId.HOP1, self.factory, self.now):
                self._emit_shot(sink, out)
        for pivot_id in self.topology.ids_of_kind(NodeKind.PIVOT):
            pivot = self.nodes[pivot_id]
            if pivot.alive:
                for out in init_flood(pivot, TreeId.HOP2, self.factory, self.now):
                    self._emit_shot(pivot, out)

    def build_trees(self) -> None:
        """Flood both trees from their roots and run to quiescence."""
        self._start_floods()
        self._drain()

    def _refresh_trees(self) -> None:
        """Forget all levels and flood afresh, without stopping data traffic.

        Scheduled after failure batches: local repair handles a lost relay,
        but a region that lost both of its trees at once can only converge
        again through a re-flood.  Routing tables rebuild incrementally as
        the new flood advertisements land.
        """
        for node in self.nodes.values():
            node.hop_levels.reset()
            node.routing_table.reset_tree_state()
            self.trace.emit(plain_record(self.now, "TREE_RESET", node.id))
        self._start_floods()

    def rebuild_trees(self) -> None:
        """Explicit reset-and-reflood for quiesced simulations."""
        self._refresh_trees()
        self._drain()

    def subscribe(self) -> None:
        """Flood every configured interest from the sink and quiesce."""
        sink = self.nodes[SINK_ID]
        for interest in self.cfg.interests:
            outs = propagate_subscription(sink, interest, self.cfg.deployment(), self.factory, self.now)
            for out in outs:
                self.trace.emit(packet_record(self.now, "SUBSCRIBE_FWD", sink.id, out.packet, to=out.to))
                self._deliver(sink, out.to, out.packet)
        self._drain()

    def setup(self) -> None:
        self.build_trees()
        self.subscribe()

    # -- traffic and failures ---------------------------------------------

    def inject_failure(self, schedule: list[FailureAction], base_time: float) -> None:
        down_times = set()
        for fa in schedule:
            if fa.node == SINK_ID:
                raise ValueError("the sink cannot be scheduled down")
            body = NodeDownEv(fa.node) if fa.action == "down" else NodeUpEv(fa.node)
            self._schedule(base_time + fa.time, body)
            if fa.action == "down":
                down_times.add(fa.time)
        if self.cfg.reflood_after_failure:
            for t in sorted(down_times):
                self._schedule(base_time + t + self.cfg.reflood_delay, TreeRefresh())

    def run_traffic(self, schedule: list[SenseSpec], failures: list[FailureAction]) -> None:
        base = self.now
        for spec in schedule:
            self._schedule(base + spec.offset, SenseFire(spec.node, spec))
        self.inject_failure(failures, base)
        self._drain()

    # -- event handlers ---------------------------------------------------

    def _on_arrival(self, ev: Arrival) -> None:
        node = self.nodes[ev.to]
        if not node.alive:
            return
        p = ev.packet
        if p.kind is PacketKind.SHOT_FLOOD:
            self._handle_shot(node, p)
        elif p.kind is PacketKind.SUBSCRIBE:
            self._handle_subscribe(node, p)
        elif p.kind is PacketKind.REPORT:
            self._handle_report(node, p)
        elif p.kind is PacketKind.ACK:
            self._handle_ack(node, p)
        elif p.kind is PacketKind.HELLO:
            self._handle_hello(node, p)
        elif p.kind is PacketKind.REPLY:
            self._handle_reply(node, p)

    def _emit_shot(self, node: NodeState, out: Outbound) -> None:
        self.trace.emit(packet_record(self.now, "SHOT_EMIT", node.id, out.packet, to=out.to))
        self._deliver(node, out.to, out.packet)

    def _handle_shot(self, node: NodeState, p: Packet) -> None:
        msg = ShotValue(tree=p.tree, value=p.shot_value)
        result = on_shot(node, msg, p.sender, self.factory, self.now)
        if msg.tree is TreeId.HOP2 and p.sender in node.neighbors:
            # a flood value v advertises that its sender sits at level v-1
            node.routing_table.note_neighbor_level(p.sender, msg.value - 1, node.hop_levels.b)
        if not result.accepted:
            saved = node.hop_levels.level(msg.tree)
            self.trace.emit(
                packet_record(
                    self.now, "SHOT_REJECT", node.id, p,
                    reason=result.reject_reason,
                    saved="-" if saved is None else saved,
                )
            )
            return
        self.trace.emit(packet_record(self.now, "SHOT_ACCEPT", node.id, p, parent=p.sender))
        for out in result.forwards:
            self._emit_shot(node, out)

    def _handle_subscribe(self, node: NodeState, p: Packet) -> None:
        if not self.nodes[p.sender].alive:
            return  # the stored upstream neighbor must be alive at storage time
        result = on_subscribe(node, p, self.factory, self.now)
        if not result.stored:
            return
        self.trace.emit(packet_record(self.now, "SUBSCRIBE_STORE", node.id, p, learned_from=p.sender))
        for out in result.forwards:
            self.trace.emit(packet_record(self.now, "SUBSCRIBE_FWD", node.id, out.packet, to=out.to))
            self._deliver(node, out.to, out.packet)

    def _handle_report(self, node: NodeState, p: Packet) -> None:
        ack = self.factory.make_packet(
            PacketKind.ACK, CONTROL_PRIORITY, node.id, self.now, ack_origin=p.origin, ack_seq=p.seq
        )
        self.trace.emit(packet_record(self.now, "ACK_SEND", node.id, ack, to=p.sender))
        self._deliver(node, p.sender, ack)

        disposition = report_disposition(node, p)
        if disposition == DISPOSITION_DELIVER:
            key = (p.origin, p.seq)
            if key in self._delivered_seen:
                # retransmission duplicate: traced, but never double-counted
                self.trace.emit(packet_record(self.now, "REPORT_DROP", node.id, p, reason="duplicate"))
                return
            self._delivered_seen.add(key)
            latency = self.now - p.created_at
            counts = self.metrics.per_class[classify(p, self.cfg.rt_priority_threshold)]
            counts.delivered += 1
            counts.latency_samples.append(latency)
            self.trace.emit(
                packet_record(self.now, "REPORT_DELIVER", node.id, p, latency=f"{latency:.6f}")
            )
        elif disposition == DISPOSITION_DROP_UNKNOWN:
            self._drop_report(node, p, "unknown_interest")
        else:
            forwarded = replace(p, hop_count=p.hop_count + 1)
            if forwarded.hop_count > self._hop_limit:
                self._drop_report(node, forwarded, "hop_limit")
                return
            self._enqueue_data(node, forwarded)

    def _drop_report(self, node: NodeState, p: Packet, reason: str) -> None:
        self.trace.emit(packet_record(self.now, "REPORT_DROP", node.id, p, reason=reason))
        self.metrics.per_class[classify(p, self.cfg.rt_priority_threshold)].dropped += 1

    def _enqueue_data(self, node: NodeState, p: Packet) -> None:
        result = enqueue(node.queues, p, self.cfg.rt_priority_threshold)
        if not result.accepted:
            self.trace.emit(
                packet_record(
                    self.now, "DROP_FULL", node.id, p,
                    cls=result.traffic_class.value, qlen=result.queue_len,
                )
            )
            self.metrics.per_class[result.traffic_class].dropped += 1
            return
        self.trace.emit(
            packet_record(
                self.now, "ENQ", node.id, p, cls=result.traffic_class.value, qlen=result.queue_len
            )
        )
        self.metrics.note_queue_len(node.id, result.queue_len)
        self._kick(node)

    def _next_service_item(self, node: NodeState) -> ServiceItem | None:
        if node.retx:
            return node.retx.popleft()
        if self.cfg.scheduler == "fq":
            pkt, last = dequeue_fair(node.queues, self._last_served.get(node.id))
            self._last_served[node.id] = last
        else:
            pkt = dequeue(node.queues)
        if pkt is None:
            return None
        self.trace.emit(
            packet_record(
                self.now, "DEQ", node.id, pkt,
                cls=classify(pkt, self.cfg.rt_priority_threshold).value,
            )
        )
        return ServiceItem(packet=pkt, attempts=1)

    def _kick(self, node: NodeState) -> None:
        """Start the transmitter if idle: retransmissions first, then queues."""
        if not node.alive or node.tx_busy:
            return
        while True:
            item = self._next_service_item(node)
            if item is None:
                return
            if item.forced_next_hop is not None:
                hop = NextHop(item.forced_next_hop, item.forced_route or ROUTE_REPAIR)
            else:
                hop = next_hop_for_report(node, item.packet)
            if hop is None:
                self._start_discovery(node, item)
                continue
            node.tx_busy = True
            node.in_service = (item, hop)
            self._schedule(self.now + self.cfg.service_time, TxComplete(node.id, item))
            return

    def _recorded_b(self, node: NodeState, neighbor: NodeId) -> int | None:
        for cand in node.routing_table.toward_pivot:
            if cand.neighbor == neighbor:
                return cand.b_level
        return None

    def _on_tx_complete(self, ev: TxComplete) -> None:
        node = self.nodes[ev.node]
        if not node.alive or node.in_service is None or node.in_service[0] is not ev.token:
            return
        item, hop = node.in_service
        node.in_service = None
        node.tx_busy = False
        p = item.packet

        extra: dict[str, object] = {"to": hop.node_id, "route": hop.route}
        if hop.route == ROUTE_GRADIENT:
            extra["b_from"] = node.hop_levels.b
            extra["b_to"] = self._recorded_b(node, hop.node_id)
        self.trace.emit(packet_record(self.now, "REPORT_FORWARD", node.id, p, **extra))

        scheduled = self._deliver(node, hop.node_id, p)
        pending = on_send(node, p, hop.node_id, self.now, self.cfg.ack_timeout, hop.route, item.attempts)
        pending.tx_lost = not scheduled
        self.trace.emit(
            packet_record(
                self.now, "ACK_START", node.id, p,
                next_hop=hop.node_id, deadline=f"{pending.deadline:.6f}", attempt=item.attempts,
            )
        )
        self._schedule(pending.deadline, AckTimeout(node.id, p.origin, p.seq, pending), rank=TIMER_RANK)
        self._kick(node)

    def _handle_ack(self, node: NodeState, p: Packet) -> None:
        if on_ack(node, p.ack_origin, p.ack_seq):
            self.trace.emit(packet_record(self.now, "ACK_OK", node.id, p))
        else:
            self.trace.emit(packet_record(self.now, "ACK_UNKNOWN", node.id, p))

    def _on_ack_timeout(self, ev: AckTimeout) -> None:
        node = self.nodes[ev.node]
        if not node.alive:
            return
        pending = node.pending_acks.get((ev.origin, ev.seq))
        if pending is not ev.token:
            return  # acked, superseded, or wiped by a failure
        self.trace.emit(
            packet_record(self.now, "ACK_TIMEOUT", node.id, pending.packet, next_hop=pending.next_hop)
        )
        decision = on_timeout(node, pending, self.now, self.cfg.max_attempts)
        if decision.action == "drop":
            self.metrics.repair_drops += 1
            self.trace.emit(
                packet_record(self.now, "DROP_REPAIR", node.id, pending.packet, reason="max_attempts")
            )
            self.metrics.per_class[classify(pending.packet, self.cfg.rt_priority_threshold)].dropped += 1
        elif decision.action == "reroute":
            self.metrics.reroutes += 1
            self.trace.emit(
                packet_record(
                    self.now, "REROUTE", node.id, pending.packet,
                    old=pending.next_hop, new=decision.new_next_hop,
                )
            )
            node.retx.append(
                ServiceItem(
                    packet=pending.packet,
                    attempts=pending.attempts + 1,
                    forced_next_hop=decision.new_next_hop,
                    forced_route=decision.new_route,
                )
            )
            self._kick(node)
        else:
            self._start_discovery(node, ServiceItem(packet=pending.packet, attempts=pending.attempts + 1))

    def _start_discovery(self, node: NodeState, item: ServiceItem) -> None:
        if node.discovery is None:
            node.discovery = DiscoveryState()
            hello = make_hello(node, self.factory, self.now)
            self.trace.emit(packet_record(self.now, "HELLO_BCAST", node.id, hello))
            self.metrics.hellos += 1
            for neighbor in node.sorted_neighbors():
                self._deliver(node, neighbor, hello)
            self._schedule(
                self.now + self.cfg.reply_window, WindowClose(node.id, node.discovery), rank=TIMER_RANK
            )
        node.discovery.waiting.append(item)

    def _handle_hello(self, node: NodeState, p: Packet) -> None:
        reply = on_hello(node, self.factory, self.now, asker=p.sender)
        self.trace.emit(packet_record(self.now, "REPLY_SEND", node.id, reply, to=p.sender))
        self._deliver(node, p.sender, reply)

    def _handle_reply(self, node: NodeState, p: Packet) -> None:
        node.routing_table.clear_exhausted(p.reply_responder)
        if node.discovery is None:
            return  # window already closed; the liveness hint was still taken
        self.trace.emit(packet_record(self.now, "REPLY_RECV", node.id, p))
        node.discovery.replies.append(ReplyInfo(p.reply_responder, p.reply_hop_level))

    def _on_window_close(self, ev: WindowClose) -> None:
        node = self.nodes[ev.node]
        if not node.alive or node.discovery is not ev.token:
            return
        discovery = node.discovery
        node.discovery = None
        receiver = select_new_receiver(discovery.replies)
        if receiver is None:
            for item in discovery.waiting:
                self.metrics.repair_drops += 1
                self.trace.emit(
                    packet_record(self.now, "DROP_REPAIR", node.id, item.packet, reason="no_receiver")
                )
                self.metrics.per_class[
                    classify(item.packet, self.cfg.rt_priority_threshold)
                ].dropped += 1
            return
        hop_level = min(
            r.hop_level for r in discovery.replies if r.responder == receiver and r.hop_level is not None
        )
        self.trace.emit(plain_record(self.now, "NEW_RECEIVER", node.id, id=receiver, hop=hop_level))
        self.metrics.new_receivers += 1
        install_receiver(node, receiver, hop_level)
        for item in discovery.waiting:
            if item.packet.sender == receiver:
                # a packet must not return to its upstream; with the new
                # receiver installed, any other usable hop is found on the
                # normal path, otherwise the packet is out of options
                if next_hop_for_report(node, item.packet) is None:
                    self.metrics.repair_drops += 1
                    self.trace.emit(
                        packet_record(self.now, "DROP_REPAIR", node.id, item.packet, reason="no_receiver")
                    )
                    self.metrics.per_class[
                        classify(item.packet, self.cfg.rt_priority_threshold)
                    ].dropped += 1
                    continue
                node.retx.append(ServiceItem(packet=item.packet, attempts=item.attempts))
                continue
            node.retx.append(
                ServiceItem(
                    packet=item.packet,
                    attempts=item.attempts,
                    forced_next_hop=receiver,
                    forced_route=ROUTE_REPAIR,
                )
            )
        self._kick(node)

    def _on_sense_fire(self, ev: SenseFire) -> None:
        node = self.nodes[ev.node]
        if not node.alive:
            return
        spec = ev.spec
        sensed = SensedEvent(spec.attribute, spec.value, node.position, self.now)
        priority = (
            self.cfg.rt_priority
            if spec.traffic_class is TrafficClass.REAL_TIME
            else self.cfg.nrt_priority
        )
        report = on_sense(node, sensed, self.now, self.factory, priority)
        if report is None:
            self.trace.emit(plain_record(self.now, "SENSE_IGNORE", node.id, attr=spec.attribute))
            return
        self.metrics.per_class[classify(report, self.cfg.rt_priority_threshold)].generated += 1
        self.trace.emit(packet_record(self.now, "SENSE_MATCH", node.id, report, attr=spec.attribute))
        self._enqueue_data(node, report)

    def _on_node_down(self, node_id: NodeId) -> None:
        node = self.nodes[node_id]
        if not node.alive:
            return
        node.alive = False
        self.trace.emit(plain_record(self.now, "NODE_DOWN", node.id))
        # every report this node still has custody of dies with it
        for pkt in list(node.queues.rt) + list(node.queues.nrt):
            self._drop_report(node, pkt, "node_down")
        node.queues.clear()
        for item in node.retx:
            self._drop_report(node, item.packet, "node_down")
        node.retx.clear()
        if node.in_service is not None:
            item, _hop = node.in_service
            self._drop_report(node, item.packet, "node_down")
            node.in_service = None
        node.tx_busy = False
        if node.discovery is not None:
            for item in node.discovery.waiting:
                self._drop_report(node, item.packet, "node_down")
            node.discovery = None
        for pending in node.pending_acks.values():
            if pending.tx_lost:
                # the transmission never made it onto a link, so the retained
                # copy was the only live instance of this packet
                self._drop_report(node, pending.packet, "node_down")
        node.pending_acks.clear()

    def _on_node_up(self, node_id: NodeId) -> None:
        node = self.nodes[node_id]
        if node.alive:
            return
        node.alive = True
        node.hop_levels.reset()
        self.trace.emit(plain_record(self.now, "NODE_UP", node.id))

    # -- results -----------------------------------------------------------

    def result(self) -> RunResult:
        return RunResult(
            metrics=self.metrics,
            trace_lines=self.trace.lines,
            topology=self.topology,
            config=self.cfg,
        )


def run_scenario(
    cfg: ScenarioConfig,
    topology: Topology | None = None,
    traffic: list[SenseSpec] | None = None,
    failures: list[FailureAction] | None = None,
) -> RunResult:
    """Full run: build topology, flood trees, subscribe, play traffic, quiesce.

    The whole trace is a pure function of (cfg, seed); callers may inject an
    explicit topology, traffic schedule, or failure schedule for testing.
    """
    sim = Simulator(cfg, topology=topology)
    sim.setup()
    if traffic is None:
        traffic = generate_traffic(cfg, sim.topology, random.Random(cfg.seed + TRAFFIC_SEED_OFFSET))
    if failures is None:
        failures = plan_failures(cfg, sim.topology, random.Random(cfg.seed + FAILURE_SEED_OFFSET))
    sim.run_traffic(traffic, failures)
    return sim.result()
