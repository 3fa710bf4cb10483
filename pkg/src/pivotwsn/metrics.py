"""Run metrics and their reduction to sweep rows / CSV."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .model import NodeId
from .qos_queue import TrafficClass

CSV_HEADER = "network_size,avg_latency_rt,avg_latency_nrt,delivery_rate_rt,delivery_rate_nrt"


@dataclass
class ClassCounts:
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    latency_samples: list[float] = field(default_factory=list)

    @property
    def in_flight(self) -> int:
        return self.generated - self.delivered - self.dropped


@dataclass
class Metrics:
    per_class: dict[TrafficClass, ClassCounts] = field(
        default_factory=lambda: {cls: ClassCounts() for cls in TrafficClass}
    )
    reroutes: int = 0
    hellos: int = 0
    new_receivers: int = 0
    repair_drops: int = 0
    transmissions: dict[NodeId, int] = field(default_factory=dict)
    energy_spent: dict[NodeId, float] = field(default_factory=dict)
    max_queue_len: dict[NodeId, int] = field(default_factory=dict)

    def note_transmission(self, node: NodeId, tx_cost: float) -> None:
        self.transmissions[node] = self.transmissions.get(node, 0) + 1
        self.energy_spent[node] = self.energy_spent.get(node, 0.0) + tx_cost

    def note_queue_len(self, node: NodeId, length: int) -> None:
        if length > self.max_queue_len.get(node, 0):
            self.max_queue_len[node] = length

    @classmethod
    def merge(cls, runs: list["Metrics"]) -> "Metrics":
        """Pool several runs: counts add up, latency samples concatenate."""
        merged = cls()
        for m in runs:
            for tc, counts in m.per_class.items():
                dst = merged.per_class[tc]
                dst.generated += counts.generated
                dst.delivered += counts.delivered
                dst.dropped += counts.dropped
                dst.latency_samples.extend(counts.latency_samples)
            merged.reroutes += m.reroutes
            merged.hellos += m.hellos
            merged.new_receivers += m.new_receivers
            merged.repair_drops += m.repair_drops
        return merged


@dataclass
class SweepRow:
    """One row of the network-size experiment; None latency means no deliveries."""

    network_size: int
    avg_latency_rt: float | None
    avg_latency_nrt: float | None
    delivery_rate_rt: float
    delivery_rate_nrt: float
    failed: bool = False
    delivered_rt: int = 0
    delivered_nrt: int = 0


def _average(samples: list[float]) -> float | None:
    if not samples:
        return None
    return sum(samples) / len(samples)


def summarize(metrics: Metrics, network_size: int) -> SweepRow:
    """Collapse one (possibly pooled) Metrics into a sweep row."""
    rt = metrics.per_class[TrafficClass.REAL_TIME]
    nrt = metrics.per_class[TrafficClass.NON_REAL_TIME]
    return SweepRow(
        network_size=network_size,
        avg_latency_rt=_average(rt.latency_samples),
        avg_latency_nrt=_average(nrt.latency_samples),
        delivery_rate_rt=rt.delivered / rt.generated if rt.generated else 0.0,
        delivery_rate_nrt=nrt.delivered / nrt.generated if nrt.generated else 0.0,
        delivered_rt=rt.delivered,
        delivered_nrt=nrt.delivered,
    )


def _cell(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def rows_to_csv(rows: list[SweepRow]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for row in rows:
        out.write(
            f"{row.network_size},{_cell(row.avg_latency_rt)},{_cell(row.avg_latency_nrt)},"
            f"{row.delivery_rate_rt:.6f},{row.delivery_rate_nrt:.6f}\n"
        )
    return out.getvalue()
