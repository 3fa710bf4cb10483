"""Two-class packet queuing: classify by header priority, serve real-time first.

The organizer maps the 4-valued header priority onto the two queues; the
scheduler is strict (non-preemptive) priority by default, with a round-robin
fair mode kept behind a configuration flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Packet, QueuePair

#: Priorities at or above this value are real-time traffic.
RT_PRIORITY_THRESHOLD = 2


class TrafficClass(Enum):
    REAL_TIME = "RT"
    NON_REAL_TIME = "NRT"


class SchedulerMode(Enum):
    STRICT = "strict"
    FAIR = "fq"


def classify(p: Packet, threshold: int = RT_PRIORITY_THRESHOLD) -> TrafficClass:
    return TrafficClass.REAL_TIME if p.priority >= threshold else TrafficClass.NON_REAL_TIME


@dataclass(frozen=True)
class EnqueueResult:
    traffic_class: TrafficClass
    accepted: bool
    queue_len: int


def enqueue(q: QueuePair, p: Packet, threshold: int = RT_PRIORITY_THRESHOLD) -> EnqueueResult:
    """Append to the tail of the classified queue; drop when that queue is full."""
    cls = classify(p, threshold)
    fifo = q.rt if cls is TrafficClass.REAL_TIME else q.nrt
    if len(fifo) >= q.capacity:
        return EnqueueResult(cls, accepted=False, queue_len=len(fifo))
    fifo.append(p)
    return EnqueueResult(cls, accepted=True, queue_len=len(fifo))


def dequeue(q: QueuePair) -> Packet | None:
    """Strict priority: head of the real-time queue, else head of the other."""
    if q.rt:
        return q.rt.popleft()
    if q.nrt:
        return q.nrt.popleft()
    return None


def dequeue_fair(
    q: QueuePair, last_served: TrafficClass | None
) -> tuple[Packet | None, TrafficClass | None]:
    """Round-robin between the classes when both queues are occupied."""
    if q.rt and q.nrt:
        if last_served is TrafficClass.REAL_TIME:
            return q.nrt.popleft(), TrafficClass.NON_REAL_TIME
        return q.rt.popleft(), TrafficClass.REAL_TIME
    if q.rt:
        return q.rt.popleft(), TrafficClass.REAL_TIME
    if q.nrt:
        return q.nrt.popleft(), TrafficClass.NON_REAL_TIME
    return None, last_served
