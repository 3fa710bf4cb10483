"""Network-size sweeps reproducing the latency-vs-size experiment."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .checker import Violation, check_trace
from .config import ScenarioConfig
from .engine import run_scenario
from .metrics import Metrics, SweepRow, rows_to_csv, summarize
from .topology import TopologyError

#: Replicate r of size index i runs with seed + i + r * REPLICATE_SEED_STRIDE,
#: so the first replicate of each size uses seed + size_index exactly.
REPLICATE_SEED_STRIDE = 1000


@dataclass
class SweepResult:
    rows: list[SweepRow]
    violations: dict[int, list[Violation]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not any(row.failed for row in self.rows)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


def size_config(base_cfg: ScenarioConfig, size: int, run_seed: int) -> ScenarioConfig:
    """Scale the sensor count so the whole network has ``size`` nodes."""
    sensors = size - base_cfg.pivot_count - 1
    if sensors < 1:
        raise ValueError(
            f"size {size} cannot hold a sink, {base_cfg.pivot_count} pivot(s) and a sensor"
        )
    return replace(
        base_cfg,
        sensor_count=sensors,
        seed=run_seed,
        interests=list(base_cfg.interests),
        failures=list(base_cfg.failures),
    )


def sweep(
    base_cfg: ScenarioConfig,
    sizes: list[int],
    replicates: int = 1,
    check_runs: bool = True,
) -> SweepResult:
    """One pooled row per network size, averaged over ``replicates`` seeds.

    Latency samples and delivery counts from all replicates of a size are
    pooled before averaging.  A size whose every replicate fails topology
    generation is emitted as a failed row and the sweep continues.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    result = SweepResult(rows=[])
    for index, size in enumerate(sorted(sizes)):
        run_metrics: list[Metrics] = []
        run_violations: list[Violation] = []
        for replicate in range(replicates):
            run_seed = base_cfg.seed + index + replicate * REPLICATE_SEED_STRIDE
            cfg = size_config(base_cfg, size, run_seed)
            try:
                run = run_scenario(cfg)
            except TopologyError:
                continue
            run_metrics.append(run.metrics)
            if check_runs:
                run_violations.extend(check_trace(run.trace_lines))
        if not run_metrics:
            result.rows.append(
                SweepRow(
                    network_size=size,
                    avg_latency_rt=None,
                    avg_latency_nrt=None,
                    delivery_rate_rt=0.0,
                    delivery_rate_nrt=0.0,
                    failed=True,
                )
            )
            continue
        row = summarize(Metrics.merge(run_metrics), network_size=size)
        result.rows.append(row)
        if run_violations:
            result.violations[size] = run_violations
    return result
