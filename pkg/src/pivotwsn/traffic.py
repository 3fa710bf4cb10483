"""Sense-event schedules and failure planning for a scenario run.

Times in the generated schedules are offsets from the start of the traffic
phase; the engine rebases them onto the simulation clock once setup (floods
and subscription) has quiesced.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from .config import SINK_ID, FailureAction, ScenarioConfig
from .model import Interest, NodeId, NodeKind
from .qos_queue import TrafficClass
from .topology import Topology


@dataclass(frozen=True)
class SenseSpec:
    """One scheduled sensing: which sensor perceives which attribute when."""

    offset: float
    node: NodeId
    attribute: str
    traffic_class: TrafficClass
    value: float = 0.0


def _sensors_in_region(topology: Topology, interest: Interest) -> list[NodeId]:
    return [
        n.id
        for n in topology.nodes
        if n.kind is NodeKind.SENSOR and interest.region.contains(n.position)
    ]


def _arrival_times(rate: float, duration: float, rng: random.Random) -> list[float]:
    """Poisson arrivals over [0, duration)."""
    times = []
    t = 0.0
    if rate <= 0:
        return times
    while True:
        t += rng.expovariate(rate)
        if t >= duration:
            return times
        times.append(t)


def generate_traffic(cfg: ScenarioConfig, topology: Topology, rng: random.Random) -> list[SenseSpec]:
    """Build the sense schedule for both traffic classes.

    In paired mode (the default) each arrival produces one real-time and one
    non-real-time sensing at the same instant and sensor, the real-time one
    first, so the offered load of the two classes is identical event by event.
    Unpaired mode draws two independent arrival processes at the same rate.
    """
    candidates: dict[int, list[NodeId]] = {}
    for interest in cfg.interests:
        inside = _sensors_in_region(topology, interest)
        if inside:
            candidates[interest.interest_id] = inside
    if not candidates:
        warnings.warn("no sensors inside any interest region; traffic schedule is empty")
        return []
    interest_list = [i for i in cfg.interests if i.interest_id in candidates]

    def draw_target() -> tuple[str, NodeId]:
        interest = interest_list[rng.randrange(len(interest_list))]
        sensors = candidates[interest.interest_id]
        return interest.attribute, sensors[rng.randrange(len(sensors))]

    schedule: list[SenseSpec] = []
    if cfg.traffic_paired:
        for t in _arrival_times(cfg.traffic_rate, cfg.traffic_duration, rng):
            attribute, node = draw_target()
            schedule.append(SenseSpec(t, node, attribute, TrafficClass.REAL_TIME))
            schedule.append(SenseSpec(t, node, attribute, TrafficClass.NON_REAL_TIME))
    else:
        for cls in (TrafficClass.REAL_TIME, TrafficClass.NON_REAL_TIME):
            for t in _arrival_times(cfg.traffic_rate, cfg.traffic_duration, rng):
                attribute, node = draw_target()
                schedule.append(SenseSpec(t, node, attribute, cls))
        schedule.sort(key=lambda s: (s.offset, s.traffic_class is TrafficClass.NON_REAL_TIME, s.node))
    return schedule


def plan_failures(cfg: ScenarioConfig, topology: Topology, rng: random.Random) -> list[FailureAction]:
    """Explicit failure entries plus, if configured, an auto-planned kill set.

    The auto planner takes a fraction of sensors down at failure_time.  With
    connectivity preservation on, a victim is skipped when removing it would
    cut a surviving sensor off from every pivot and the sink, so repair always
    has some physical path to discover.
    """
    planned = list(cfg.failures)
    if cfg.failure_fraction <= 0:
        return planned
    sensors = topology.ids_of_kind(NodeKind.SENSOR)
    want = round(cfg.failure_fraction * len(sensors))
    order = sensors[:]
    rng.shuffle(order)
    roots = set(topology.ids_of_kind(NodeKind.PIVOT)) | {SINK_ID}
    victims: set[NodeId] = set()

    def still_served(candidate: NodeId) -> bool:
        dead = victims | {candidate}
        reachable: set[NodeId] = set()
        stack = [r for r in roots]
        reachable.update(stack)
        while stack:
            for neighbor in topology.mutual[stack.pop()]:
                if neighbor not in dead and neighbor not in reachable:
                    reachable.add(neighbor)
                    stack.append(neighbor)
        for sensor in sensors:
            if sensor in dead:
                continue
            had_path = bool(topology.mutual_component(sensor) & roots)
            if had_path and sensor not in reachable:
                return False
        return True

    for candidate in order:
        if len(victims) >= want:
            break
        if cfg.failure_preserve_connectivity and not still_served(candidate):
            continue
        victims.add(candidate)
    planned.extend(FailureAction(cfg.failure_time, v, "down") for v in sorted(victims))
    planned.sort(key=lambda fa: (fa.time, fa.node))
    return planned
