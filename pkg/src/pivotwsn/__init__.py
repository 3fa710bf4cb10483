"""pivotwsn: deterministic simulator for pivot-mediated QoS sensor routing.

Sensors report down a pivot-rooted hop gradient, the pivot relays straight to
the sink, two priority classes share every node through a real-time-first
queue pair, and per-hop ack timers drive alternate-path repair.
"""

from .checker import Violation, check_trace, check_trace_file
from .config import ConfigError, ScenarioConfig, default_interest, load_config, parse_config
from .engine import RunResult, SimulationError, Simulator, run_scenario
from .harness import SweepResult, sweep
from .hop_tree import bfs_oracle, init_flood, on_shot
from .metrics import CSV_HEADER, Metrics, SweepRow, rows_to_csv, summarize
from .model import (
    Interest,
    NodeId,
    NodeKind,
    NodeState,
    Packet,
    PacketFactory,
    PacketKind,
    Position,
    Region,
    SensedEvent,
    TreeId,
    validate_header,
)
from .qos_queue import TrafficClass, classify, dequeue, enqueue
from .topology import Topology, TopologyError, generate_topology

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "Interest",
    "Metrics",
    "NodeId",
    "NodeKind",
    "NodeState",
    "Packet",
    "PacketFactory",
    "PacketKind",
    "Position",
    "Region",
    "RunResult",
    "ScenarioConfig",
    "SensedEvent",
    "SimulationError",
    "Simulator",
    "SweepResult",
    "SweepRow",
    "Topology",
    "TopologyError",
    "TrafficClass",
    "TreeId",
    "Violation",
    "bfs_oracle",
    "check_trace",
    "check_trace_file",
    "classify",
    "default_interest",
    "dequeue",
    "enqueue",
    "generate_topology",
    "init_flood",
    "load_config",
    "on_shot",
    "parse_config",
    "rows_to_csv",
    "run_scenario",
    "summarize",
    "sweep",
    "validate_header",
    "__version__",
]
