"""Command-line harness: simulate, sweep, check, topology.

Exit code 0 means the requested runs completed with no invariant violations
and no failed sweep rows.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .checker import check_trace_file
from .config import ConfigError, ScenarioConfig, load_config
from .engine import run_scenario
from .harness import sweep
from .metrics import Metrics
from .qos_queue import TrafficClass
from .topology import TopologyError, generate_topology


def _load(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig().check()
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed, interests=list(cfg.interests), failures=list(cfg.failures))
    return cfg


def _print_summary(metrics: Metrics) -> None:
    for cls in TrafficClass:
        counts = metrics.per_class[cls]
        avg = (
            f"{sum(counts.latency_samples) / len(counts.latency_samples):.6f}"
            if counts.latency_samples
            else "n/a"
        )
        print(
            f"{cls.value:>3}: generated={counts.generated} delivered={counts.delivered} "
            f"dropped={counts.dropped} in_flight={counts.in_flight} avg_latency={avg}"
        )
    print(
        f"repair: reroutes={metrics.reroutes} hellos={metrics.hellos} "
        f"new_receivers={metrics.new_receivers} drops={metrics.repair_drops}"
    )
    print(
        f"energy: total_spent={sum(metrics.energy_spent.values()):.1f} "
        f"transmissions={sum(metrics.transmissions.values())}"
    )


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load(args)
    run = run_scenario(cfg)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for line in run.trace_lines:
                fh.write(line + "\n")
        print(f"trace: {len(run.trace_lines)} lines -> {args.trace}")
    _print_summary(run.metrics)
    from .checker import check_trace

    violations = check_trace(run.trace_lines)
    if violations:
        for v in violations:
            print(str(v), file=sys.stderr)
        print(f"{len(violations)} invariant violation(s)", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load(args)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    result = sweep(cfg, sizes, replicates=args.replicates)
    csv_text = result.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"csv -> {args.out}")
    print(csv_text, end="")
    status = 0
    for row in result.rows:
        if row.failed:
            print(f"size {row.network_size}: no usable topology (row failed)", file=sys.stderr)
            status = 1
    for size, violations in result.violations.items():
        print(f"size {size}: {len(violations)} invariant violation(s)", file=sys.stderr)
        status = 1
    return status


def _cmd_check(args: argparse.Namespace) -> int:
    violations = check_trace_file(args.trace)
    for v in violations:
        print(str(v))
    print(f"{len(violations)} violation(s)")
    return 1 if violations else 0


def _cmd_topology(args: argparse.Namespace) -> int:
    cfg = _load(args)
    try:
        topo = generate_topology(cfg, cfg.seed)
    except TopologyError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    payload = {
        "seed_used": topo.seed_used,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind.value,
                "x": n.position.x,
                "y": n.position.y,
                "range": n.tx_range,
            }
            for n in topo.nodes
        ],
        "directed_links": sorted(topo.directed_links),
        "mutual_links": sorted(
            (a, b) for a, neighbors in topo.mutual.items() for b in neighbors if a < b
        ),
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"topology -> {args.out}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotwsn",
        description="Discrete-event simulator for pivot-mediated QoS sensor routing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario and print a summary")
    p_sim.add_argument("--config", help="scenario file (defaults apply when omitted)")
    p_sim.add_argument("--seed", type=int, help="override the scenario seed")
    p_sim.add_argument("--trace", help="write the event trace to this path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="latency vs network size, CSV out")
    p_sweep.add_argument("--config", help="base scenario file")
    p_sweep.add_argument("--seed", type=int, help="override the scenario seed")
    p_sweep.add_argument("--sizes", default="10,15,20,25", help="comma-separated node totals")
    p_sweep.add_argument("--replicates", type=int, default=1, help="seeds averaged per size")
    p_sweep.add_argument("--out", help="CSV output path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_check = sub.add_parser("check", help="validate a trace file's invariants")
    p_check.add_argument("--trace", required=True, help="trace file to validate")
    p_check.set_defaults(func=_cmd_check)

    p_topo = sub.add_parser("topology", help="dump node positions and links as JSON")
    p_topo.add_argument("--config", help="scenario file")
    p_topo.add_argument("--seed", type=int, help="override the scenario seed")
    p_topo.add_argument("--out", help="JSON output path")
    p_topo.set_defaults(func=_cmd_topology)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
