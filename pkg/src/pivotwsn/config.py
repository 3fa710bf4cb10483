"""Scenario configuration: a flat key=value text file with '#' comments.

Every key has a default; an unknown key is an error (it is almost always a
typo).  Lists use semicolons: interests are ``attr@x0,y0,x1,y1`` entries and
explicit failures are ``time:down|up:node`` entries, with times measured from
the start of the traffic phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .model import Interest, NodeId, Region

#: The generated topology assigns node ids in construction order.
SINK_ID: NodeId = 0


class ConfigError(ValueError):
    """A scenario file or value set that fails validation."""


@dataclass(frozen=True)
class FailureAction:
    time: float
    node: NodeId
    action: str  # "down" | "up"


@dataclass
class ScenarioConfig:
    # deployment
    area_width: float = 50.0
    area_height: float = 50.0
    sensor_count: int = 50
    pivot_count: int = 1
    sensor_range: float = 10.0
    pivot_range: float = 100.0  # also used by the sink, which is infrastructure
    # link and transmitter model
    per_hop_delay: float = 0.01
    service_time: float = 0.002
    # queuing
    queue_capacity: int = 64
    scheduler: str = "strict"  # "strict" | "fq"
    rt_priority_threshold: int = 2
    # repair timers
    ack_timeout: float = 0.04  # 4 x per_hop_delay
    reply_window: float = 0.02  # 2 x per_hop_delay
    max_attempts: int = 4
    # energy accounting (death by depletion is not modeled)
    tx_cost: float = 1.0
    initial_energy: float = 1_000_000.0
    # interests; parsed entries get ids 1..n and the sink as their consumer
    interests: list[Interest] = field(default_factory=list)
    # traffic
    traffic_rate: float = 40.0  # sense events per second per class
    traffic_duration: float = 10.0
    traffic_paired: bool = True  # both classes sense the same instants/sensors
    rt_priority: int = 3
    nrt_priority: int = 0
    # failures
    failures: list[FailureAction] = field(default_factory=list)
    failure_fraction: float = 0.0  # auto-planned share of sensors to kill
    failure_time: float = 0.0  # when the auto-planned kills fire
    failure_preserve_connectivity: bool = True
    # local repair handles a lost relay; a re-flood after each failure batch
    # restores the gradients of regions that lost both trees at once
    reflood_after_failure: bool = True
    reflood_delay: float = 0.2
    # run control
    seed: int = 1
    max_events: int = 10_000_000
    hop_limit: int = 0  # 0 = auto (4 x node count)
    topology_retries: int = 100

    def __post_init__(self) -> None:
        if not self.interests:
            self.interests = [default_interest(self)]

    @property
    def node_count(self) -> int:
        return self.sensor_count + self.pivot_count + 1

    def effective_hop_limit(self) -> int:
        return self.hop_limit if self.hop_limit > 0 else 4 * self.node_count

    def deployment(self) -> Region:
        return Region(0.0, 0.0, self.area_width, self.area_height)

    def validate(self) -> list[str]:
        problems = []
        if self.area_width <= 0 or self.area_height <= 0:
            problems.append("area dimensions must be positive")
        if self.sensor_count < 1:
            problems.append("need at least one sensor")
        if self.pivot_count < 1:
            problems.append("need at least one pivot")
        if self.sensor_range <= 0 or self.pivot_range <= 0:
            problems.append("transmission ranges must be positive")
        if self.per_hop_delay <= 0 or self.service_time <= 0:
            problems.append("delay model constants must be positive")
        if self.queue_capacity < 1:
            problems.append("queue capacity must be at least 1")
        if self.scheduler not in ("strict", "fq"):
            problems.append("scheduler must be 'strict' or 'fq'")
        if self.ack_timeout <= 0 or self.reply_window <= 0:
            problems.append("repair timers must be positive")
        if self.max_attempts < 1:
            problems.append("max_attempts must be at least 1")
        if self.traffic_rate < 0 or self.traffic_duration < 0:
            problems.append("traffic rate and duration cannot be negative")
        if not 0 <= self.failure_fraction < 1:
            problems.append("failure_fraction must be in [0, 1)")
        if self.reflood_delay < 0:
            problems.append("reflood_delay cannot be negative")
        if not 0 <= self.rt_priority <= 3 or not 0 <= self.nrt_priority <= 3:
            problems.append("traffic priorities must be 2-bit values")
        deployment = self.deployment()
        for interest in self.interests:
            if not deployment.contains_region(interest.region):
                problems.append(f"interest {interest.interest_id} region outside the deployment area")
        for fa in self.failures:
            if fa.action not in ("down", "up"):
                problems.append(f"failure action {fa.action!r} not recognized")
            if fa.node == SINK_ID:
                problems.append("the sink cannot be scheduled down")
        return problems

    def check(self) -> "ScenarioConfig":
        problems = self.validate()
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def with_sensor_count(self, sensor_count: int) -> "ScenarioConfig":
        return replace(self, sensor_count=sensor_count, interests=list(self.interests), failures=list(self.failures))


def default_interest(cfg: ScenarioConfig) -> Interest:
    return Interest(
        interest_id=1,
        attribute="temperature",
        region=Region(0.0, 0.0, cfg.area_width, cfg.area_height),
        sink=SINK_ID,
    )


_BOOL_KEYS = {"traffic_paired", "failure_preserve_connectivity", "reflood_after_failure"}
_INT_KEYS = {
    "sensor_count",
    "pivot_count",
    "queue_capacity",
    "rt_priority_threshold",
    "max_attempts",
    "rt_priority",
    "nrt_priority",
    "seed",
    "max_events",
    "hop_limit",
    "topology_retries",
}
_FLOAT_KEYS = {
    "area_width",
    "area_height",
    "sensor_range",
    "pivot_range",
    "per_hop_delay",
    "service_time",
    "ack_timeout",
    "reply_window",
    "tx_cost",
    "initial_energy",
    "traffic_rate",
    "traffic_duration",
    "failure_fraction",
    "failure_time",
    "reflood_delay",
}
_STR_KEYS = {"scheduler"}


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_interests(raw: str) -> list[Interest]:
    interests = []
    for i, entry in enumerate(part for part in raw.split(";") if part.strip()):
        entry = entry.strip()
        attr, at, corners = entry.partition("@")
        if not at:
            raise ConfigError(f"interest entry {entry!r} must look like attr@x0,y0,x1,y1")
        try:
            x0, y0, x1, y1 = (float(v) for v in corners.split(","))
        except ValueError as exc:
            raise ConfigError(f"interest entry {entry!r}: bad region corners") from exc
        interests.append(
            Interest(interest_id=i + 1, attribute=attr.strip(), region=Region(x0, y0, x1, y1), sink=SINK_ID)
        )
    return interests


def _parse_failures(raw: str) -> list[FailureAction]:
    actions = []
    for entry in (part.strip() for part in raw.split(";") if part.strip()):
        fields = entry.split(":")
        if len(fields) != 3:
            raise ConfigError(f"failure entry {entry!r} must look like time:down|up:node")
        try:
            actions.append(FailureAction(time=float(fields[0]), action=fields[1], node=int(fields[2])))
        except ValueError as exc:
            raise ConfigError(f"failure entry {entry!r}: bad field") from exc
    return actions


def parse_config(text: str) -> ScenarioConfig:
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, raw = line.partition("=")
        if not eq:
            raise ConfigError(f"line {lineno}: expected key = value")
        key = key.strip()
        raw = raw.strip()
        if key in _BOOL_KEYS:
            values[key] = _parse_bool(raw, key)
        elif key in _INT_KEYS:
            try:
                values[key] = int(raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc
        elif key in _STR_KEYS:
            values[key] = raw
        elif key == "interests":
            values[key] = _parse_interests(raw)
        elif key == "failures":
            values[key] = _parse_failures(raw)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return ScenarioConfig(**values).check()


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
