"""Tab-separated trace log format shared by the simulator and the checker.

Every line has nine tab-separated columns in this fixed order:

    time  verb  node  kind  origin  seq  priority  hop_count  detail

Columns 4-8 describe the packet the event is about; rows without a packet
carry "-" in those columns.  ``detail`` is a space-separated list of
``key=value`` pairs ("-" when empty).  Values never contain whitespace:
floats use their shortest exact repr, regions are comma-joined corners.

Packet-bearing rows carry the full packet in the fixed columns plus the
``sender/created/size/...`` detail keys, so a packet can be parsed back
from its row without loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Interest, NodeId, Packet, PacketKind, Region, TreeId

VERBS = frozenset(
    {
        "SHOT_EMIT",
        "SHOT_ACCEPT",
        "SHOT_REJECT",
        "TREE_RESET",
        "SUBSCRIBE_FWD",
        "SUBSCRIBE_STORE",
        "SENSE_MATCH",
        "SENSE_IGNORE",
        "REPORT_FORWARD",
        "REPORT_DELIVER",
        "REPORT_DROP",
        "ENQ",
        "DEQ",
        "DROP_FULL",
        "ACK_SEND",
        "ACK_START",
        "ACK_OK",
        "ACK_UNKNOWN",
        "ACK_TIMEOUT",
        "REROUTE",
        "HELLO_BCAST",
        "REPLY_SEND",
        "REPLY_RECV",
        "NEW_RECEIVER",
        "DROP_REPAIR",
        "NODE_DOWN",
        "NODE_UP",
    }
)

_NONE = "-"


class TraceFormatError(ValueError):
    """A line that does not parse as a trace record."""


@dataclass
class TraceRecord:
    time: float
    verb: str
    node: NodeId
    kind: PacketKind | None = None
    origin: NodeId | None = None
    seq: int | None = None
    priority: int | None = None
    hop_count: int | None = None
    detail: dict[str, str] = field(default_factory=dict)


def _fmt_float(x: float) -> str:
    # repr round-trips exactly; trailing ".0" kept so ints and floats differ
    return repr(float(x))


def packet_detail(p: Packet) -> dict[str, str]:
    """The detail keys that, together with the fixed columns, rebuild ``p``."""
    d = {
        "sender": str(p.sender),
        "created": _fmt_float(p.created_at),
        "size": str(p.payload_size),
    }
    if p.interest_id is not None:
        d["iid"] = str(p.interest_id)
    if p.tree is not None:
        d["tree"] = p.tree.value
    if p.shot_value is not None:
        d["value"] = str(p.shot_value)
    if p.interest is not None:
        i = p.interest
        r = i.region
        d["attr"] = i.attribute
        d["region"] = ",".join(_fmt_float(v) for v in (r.x_min, r.y_min, r.x_max, r.y_max))
        d["isink"] = str(i.sink)
    if p.ack_origin is not None:
        d["ack_origin"] = str(p.ack_origin)
    if p.ack_seq is not None:
        d["ack_seq"] = str(p.ack_seq)
    if p.reply_responder is not None:
        d["responder"] = str(p.reply_responder)
    if p.reply_hop_level is not None:
        d["hop"] = str(p.reply_hop_level)
    return d


def packet_record(time: float, verb: str, node: NodeId, p: Packet, **extra: object) -> TraceRecord:
    detail = packet_detail(p)
    for key, value in extra.items():
        detail[key] = value if isinstance(value, str) else str(value)
    return TraceRecord(
        time=time,
        verb=verb,
        node=node,
        kind=p.kind,
        origin=p.origin,
        seq=p.seq,
        priority=p.priority,
        hop_count=p.hop_count,
        detail=detail,
    )


def plain_record(time: float, verb: str, node: NodeId, **extra: object) -> TraceRecord:
    detail = {k: v if isinstance(v, str) else str(v) for k, v in extra.items()}
    return TraceRecord(time=time, verb=verb, node=node, detail=detail)


def format_record(rec: TraceRecord) -> str:
    if rec.verb not in VERBS:
        raise TraceFormatError(f"unknown trace verb {rec.verb!r}")
    detail = " ".join(f"{k}={v}" for k, v in rec.detail.items()) or _NONE
    cols = (
        f"{rec.time:.6f}",
        rec.verb,
        str(rec.node),
        rec.kind.value if rec.kind is not None else _NONE,
        str(rec.origin) if rec.origin is not None else _NONE,
        str(rec.seq) if rec.seq is not None else _NONE,
        str(rec.priority) if rec.priority is not None else _NONE,
        str(rec.hop_count) if rec.hop_count is not None else _NONE,
        detail,
    )
    return "\t".join(cols)


def parse_line(line: str) -> TraceRecord:
    cols = line.rstrip("\n").split("\t")
    if len(cols) != 9:
        raise TraceFormatError(f"expected 9 tab-separated columns, got {len(cols)}")
    try:
        time = float(cols[0])
    except ValueError as exc:
        raise TraceFormatError(f"bad time field {cols[0]!r}") from exc
    verb = cols[1]
    if verb not in VERBS:
        raise TraceFormatError(f"unknown trace verb {verb!r}")
    try:
        node = int(cols[2])
    except ValueError as exc:
        raise TraceFormatError(f"bad node field {cols[2]!r}") from exc

    def opt_int(s: str, name: str) -> int | None:
        if s == _NONE:
            return None
        try:
            return int(s)
        except ValueError as exc:
            raise TraceFormatError(f"bad {name} field {s!r}") from exc

    if cols[3] == _NONE:
        kind = None
    else:
        try:
            kind = PacketKind(cols[3])
        except ValueError as exc:
            raise TraceFormatError(f"bad kind field {cols[3]!r}") from exc

    detail: dict[str, str] = {}
    if cols[8] != _NONE:
        for pair in cols[8].split(" "):
            key, eq, value = pair.partition("=")
            if not eq:
                raise TraceFormatError(f"bad detail pair {pair!r}")
            detail[key] = value

    return TraceRecord(
        time=time,
        verb=verb,
        node=node,
        kind=kind,
        origin=opt_int(cols[4], "origin"),
        seq=opt_int(cols[5], "seq"),
        priority=opt_int(cols[6], "priority"),
        hop_count=opt_int(cols[7], "hop_count"),
        detail=detail,
    )


def packet_from_record(rec: TraceRecord) -> Packet:
    """Rebuild the packet carried by a packet-bearing trace record."""
    if rec.kind is None or rec.origin is None or rec.seq is None:
        raise TraceFormatError("record carries no packet")
    d = rec.detail
    try:
        interest = None
        if "attr" in d:
            corners = [float(v) for v in d["region"].split(",")]
            interest = Interest(
                interest_id=int(d["iid"]),
                attribute=d["attr"],
                region=Region(*corners),
                sink=int(d["isink"]),
            )
        return Packet(
            kind=rec.kind,
            priority=rec.priority if rec.priority is not None else 0,
            seq=rec.seq,
            origin=rec.origin,
            sender=int(d["sender"]),
            created_at=float(d["created"]),
            hop_count=rec.hop_count if rec.hop_count is not None else 0,
            payload_size=int(d["size"]),
            interest_id=int(d["iid"]) if "iid" in d else None,
            tree=TreeId(d["tree"]) if "tree" in d else None,
            shot_value=int(d["value"]) if "value" in d else None,
            interest=interest,
            ack_origin=int(d["ack_origin"]) if "ack_origin" in d else None,
            ack_seq=int(d["ack_seq"]) if "ack_seq" in d else None,
            reply_responder=int(d["responder"]) if "responder" in d else None,
            reply_hop_level=int(d["hop"]) if "hop" in d else None,
        )
    except (KeyError, ValueError) as exc:
        raise TraceFormatError(f"packet fields incomplete: {exc}") from exc


class TraceLog:
    """Accumulates formatted trace lines for one run; flushed at the end."""

    def __init__(self) -> None:
        self.lines: list[str] = []

    def emit(self, rec: TraceRecord) -> None:
        self.lines.append(format_record(rec))

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines:
                fh.write(line)
                fh.write("\n")
