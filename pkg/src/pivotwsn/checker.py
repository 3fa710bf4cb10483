"""Offline invariant checking over a trace file.

The checker never looks at simulator state: it reconstructs what it needs
(queue occupancy, accepted tree levels, open ack timers, drop accounting)
from the trace lines alone, so it doubles as an independent oracle over any
run.  An empty violation list means the trace is internally consistent.

Checked rules:
  * every line parses, with a known verb and well-formed packet fields;
  * strict priority: no non-real-time dequeue while real-time packets queue;
  * ENQ queue lengths match the reconstructed occupancy;
  * tree levels: accepted flood values strictly decrease per (node, tree);
  * ack pairing: one open timer per (node, origin, seq), each start resolved
    by exactly one ack or timeout (node death writes open timers off);
  * every timeout is followed by a repair action for that packet (reroute,
    repair forward, repair drop) unless the node itself dies;
  * every reroute is preceded by its timeout;
  * gradient forwards go strictly downhill in recorded b levels;
  * delivery accounting: drops and deliveries never exceed generation, and
    no (origin, seq) is delivered twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .trace import TraceFormatError, TraceRecord, parse_line

_DROP_VERBS = {"REPORT_DROP", "DROP_FULL", "DROP_REPAIR"}


@dataclass(frozen=True)
class Violation:
    line_no: int
    rule: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line_no}: [{self.rule}] {self.message}"


class _NodeQueueState:
    __slots__ = ("rt", "nrt")

    def __init__(self) -> None:
        self.rt = 0
        self.nrt = 0


def check_trace(lines: Iterable[str]) -> list[Violation]:
    violations: list[Violation] = []
    queues: dict[int, _NodeQueueState] = {}
    accepted_levels: dict[tuple[int, str], int] = {}
    open_acks: dict[tuple[int, int, int], int] = {}  # key -> line opened
    unresolved_timeouts: dict[tuple[int, int, int], int] = {}
    delivered: set[tuple[int, int]] = set()
    generated = 0
    completed = 0  # delivered + dropped

    def note(line_no: int, rule: str, message: str) -> None:
        violations.append(Violation(line_no, rule, message))

    def queue_state(node: int) -> _NodeQueueState:
        return queues.setdefault(node, _NodeQueueState())

    def packet_key(rec: TraceRecord) -> tuple[int, int, int] | None:
        if rec.origin is None or rec.seq is None:
            return None
        return (rec.node, rec.origin, rec.seq)

    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = parse_line(line)
        except TraceFormatError as exc:
            note(line_no, "format", str(exc))
            continue

        if rec.priority is not None and not 0 <= rec.priority <= 3:
            note(line_no, "header", f"priority {rec.priority} outside [0,3]")
        if rec.hop_count is not None and rec.hop_count < 0:
            note(line_no, "header", f"negative hop_count {rec.hop_count}")
        if rec.seq is not None and rec.seq < 1:
            note(line_no, "header", f"sequence {rec.seq} below 1")

        verb = rec.verb
        if verb == "ENQ":
            state = queue_state(rec.node)
            cls = rec.detail.get("cls")
            if cls == "RT":
                state.rt += 1
                expect = state.rt
            else:
                state.nrt += 1
                expect = state.nrt
            stated = rec.detail.get("qlen")
            if stated is not None and int(stated) != expect:
                note(line_no, "queue-len", f"ENQ qlen={stated} but reconstruction says {expect}")

        elif verb == "DEQ":
            state = queue_state(rec.node)
            cls = rec.detail.get("cls")
            if cls == "NRT" and state.rt > 0:
                note(
                    line_no,
                    "strict-priority",
                    f"node {rec.node} served NRT while {state.rt} RT packet(s) queued",
                )
            if cls == "RT":
                state.rt -= 1
            else:
                state.nrt -= 1
            if state.rt < 0 or state.nrt < 0:
                note(line_no, "queue-len", f"node {rec.node} dequeued from an empty queue")
                state.rt = max(state.rt, 0)
                state.nrt = max(state.nrt, 0)

        elif verb == "DROP_FULL":
            completed += 1

        elif verb == "SHOT_ACCEPT":
            tree = rec.detail.get("tree", "?")
            value = rec.detail.get("value")
            if value is None:
                note(line_no, "tree-level", "SHOT_ACCEPT without a value")
            else:
                key = (rec.node, tree)
                previous = accepted_levels.get(key)
                if previous is not None and int(value) >= previous:
                    note(
                        line_no,
                        "tree-level",
                        f"node {rec.node} accepted {value} for {tree} after holding {previous}",
                    )
                accepted_levels[key] = int(value)

        elif verb in ("TREE_RESET", "NODE_UP"):
            accepted_levels.pop((rec.node, "HOP1"), None)
            accepted_levels.pop((rec.node, "HOP2"), None)

        elif verb == "ACK_START":
            key = packet_key(rec)
            if key is not None:
                if key in open_acks:
                    note(
                        line_no,
                        "ack-pairing",
                        f"timer for origin={key[1]} seq={key[2]} re-registered at node {key[0]} "
                        f"while still open (line {open_acks[key]})",
                    )
                open_acks[key] = line_no

        elif verb == "ACK_OK":
            try:
                key = (rec.node, int(rec.detail["ack_origin"]), int(rec.detail["ack_seq"]))
            except (KeyError, ValueError):
                note(line_no, "ack-pairing", "ACK_OK without acked packet identity")
                continue
            if open_acks.pop(key, None) is None:
                note(line_no, "ack-pairing", f"ACK_OK with no open timer for {key}")

        elif verb == "ACK_TIMEOUT":
            key = packet_key(rec)
            if key is not None:
                if open_acks.pop(key, None) is None:
                    note(line_no, "ack-pairing", f"ACK_TIMEOUT with no open timer for {key}")
                unresolved_timeouts[key] = line_no

        elif verb == "REROUTE":
            key = packet_key(rec)
            if key is not None and unresolved_timeouts.pop(key, None) is None:
                note(line_no, "repair-causality", f"REROUTE without a preceding timeout for {key}")

        elif verb == "DROP_REPAIR":
            key = packet_key(rec)
            if key is not None:
                unresolved_timeouts.pop(key, None)
            completed += 1

        elif verb == "REPORT_FORWARD":
            key = packet_key(rec)
            if key is not None:
                unresolved_timeouts.pop(key, None)
            if rec.detail.get("route") == "gradient":
                b_from = rec.detail.get("b_from")
                b_to = rec.detail.get("b_to")
                if b_from is None or b_to is None or b_from == "None" or b_to == "None":
                    note(line_no, "downhill", "gradient forward without recorded b levels")
                elif int(b_to) >= int(b_from):
                    note(
                        line_no,
                        "downhill",
                        f"gradient forward from b={b_from} to b={b_to} does not descend",
                    )

        elif verb == "SENSE_MATCH":
            generated += 1

        elif verb == "REPORT_DELIVER":
            if rec.origin is not None and rec.seq is not None:
                identity = (rec.origin, rec.seq)
                if identity in delivered:
                    note(line_no, "accounting", f"report {identity} delivered twice")
                else:
                    delivered.add(identity)
                    completed += 1

        elif verb == "REPORT_DROP":
            if rec.detail.get("reason") != "duplicate":
                completed += 1

        elif verb == "NODE_DOWN":
            state = queue_state(rec.node)
            state.rt = 0
            state.nrt = 0
            for key in [k for k in open_acks if k[0] == rec.node]:
                del open_acks[key]
            for key in [k for k in unresolved_timeouts if k[0] == rec.node]:
                del unresolved_timeouts[key]

        if completed > generated:
            note(
                line_no,
                "accounting",
                f"completed reports ({completed}) exceed generated reports ({generated})",
            )

    for key, line_no in open_acks.items():
        violations.append(
            Violation(line_no, "ack-pairing", f"timer {key} opened here but never resolved")
        )
    for key, line_no in unresolved_timeouts.items():
        violations.append(
            Violation(line_no, "repair-causality", f"timeout {key} never followed by a repair action")
        )
    violations.sort(key=lambda v: v.line_no)
    return violations


def check_trace_file(path: str) -> list[Violation]:
    with open(path, "r", encoding="utf-8") as fh:
        return check_trace(fh)
