"""Deterministic discrete-event execution of signaling callflows.

Runs one callflow for a population of UEs. Transmission of one hop always
costs ``m * alpha`` ms (links are contention-free); every processing step
occupies its node for exactly ``beta`` ms, one step at a time, FIFO in
request order. Ties are broken by a global sequence number, so a run is a
pure function of (callflow, params, workload, seed) and traces are
bit-identical across repeats and platforms.

Node instances: each UE is its own node, each UE is served by one base
station instance (round-robin over ``Workload.base_stations``), and the
core-side nodes (AMF/eAMF/core peer) are singletons shared by all UEs.
Callflows do not distinguish source and target base stations, so all base
station work of a UE lands on its serving instance.

Within one message, processing steps located at the origin node run before
the first hop (encode side) and steps at the final node run after the last
hop (decode side); a UE's procedure is strictly sequential.
"""

from __future__ import annotations

import hashlib
import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .callflows import Callflow, CallflowVariant, MessageSpec, NodeKind, validate_callflow
from .costs import CostParams, InvalidCallflowError, ParameterError

_SEED_MASK = (1 << 64) - 1


class EmptyResultError(ValueError):
    """Raised when statistics are requested for a run with no completions."""


class EventKind(Enum):
    MESSAGE_ARRIVAL = "arrival"
    PROCESSING_COMPLETE = "processing"
    PROCEDURE_COMPLETE = "complete"


@dataclass(frozen=True)
class SimEvent:
    """One traced simulation event, totally ordered by (time, seq)."""

    time_ms: float
    seq: int
    kind: EventKind
    ue: int
    node: str
    message: str
    detail: str

    def line(self) -> str:
        return (
            f"{self.time_ms!r}|{self.seq}|{self.kind.value}|{self.ue}"
            f"|{self.node}|{self.message}|{self.detail}"
        )


@dataclass
class NodeState:
    """Single-server FIFO processing state of one node instance."""

    kind: NodeKind
    index: int
    busy_until: float = 0.0
    queue: deque = field(default_factory=deque)
    steps_served: int = 0

    @property
    def name(self) -> str:
        return f"{self.kind.value}{self.index}"


@dataclass(frozen=True)
class ArrivalProcess:
    """UE procedure-start process: simultaneous, fixed interval, or seeded
    uniform draws over a window."""

    kind: str
    param_ms: float = 0.0

    _KINDS = ("simultaneous", "interval", "random")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ParameterError(f"arrival kind must be one of {self._KINDS}")
        if self.param_ms < 0:
            raise ParameterError("arrival parameter must be >= 0 ms")

    @classmethod
    def simultaneous(cls) -> "ArrivalProcess":
        return cls("simultaneous")

    @classmethod
    def interval(cls, ms: float) -> "ArrivalProcess":
        return cls("interval", ms)

    @classmethod
    def random_uniform(cls, window_ms: float) -> "ArrivalProcess":
        return cls("random", window_ms)

    def times(self, ue_count: int, seed: int) -> list[float]:
        if self.kind == "simultaneous":
            return [0.0] * ue_count
        if self.kind == "interval":
            return [i * self.param_ms for i in range(ue_count)]
        rng = np.random.default_rng(seed & _SEED_MASK)
        return [float(t) for t in rng.uniform(0.0, self.param_ms, size=ue_count)]


@dataclass(frozen=True)
class Workload:
    ue_count: int = 1
    arrival: ArrivalProcess = ArrivalProcess.simultaneous()
    variant: CallflowVariant | None = None
    base_stations: int = 1

    def __post_init__(self):
        if self.ue_count < 1:
            raise ParameterError("ue_count must be >= 1")
        if self.base_stations < 1:
            raise ParameterError("base_stations must be >= 1")


@dataclass(frozen=True)
class CallflowStats:
    """Result of one DES run: per-UE times plus the full event trace."""

    variant: CallflowVariant
    arrivals: dict[int, float]
    completions: dict[int, float]  # procedure latency per UE, ms
    finish_times: dict[int, float]
    trace: tuple[SimEvent, ...]


def mean_completion(stats: CallflowStats) -> float:
    """Arithmetic mean of per-UE completion latencies."""
    if not stats.completions:
        raise EmptyResultError("run produced no completions")
    return sum(stats.completions.values()) / len(stats.completions)


# Internal event tags; only the public EventKind values reach the trace.
_START = 0
_STEP_REQUEST = 1
_HOP_ARRIVAL = 2
_STEP_DONE = 3


class _UeFlow:
    """Cursor of one UE through the message sequence."""

    __slots__ = ("ue", "bs", "msg_idx", "stage", "sub_idx")

    def __init__(self, ue: int, bs: int):
        self.ue = ue
        self.bs = bs
        self.msg_idx = 0
        self.stage = 0  # 0 = pre steps, 1 = hops, 2 = post steps
        self.sub_idx = 0


def _split_steps(m: MessageSpec):
    """Partition a message's steps into encode-side (origin) and
    decode-side (final node) work, preserving list order."""
    origin, dest = m.origin(), m.destination()
    pre = tuple(s for s in m.processing if s.node is origin)
    post = tuple(s for s in m.processing if s.node is not origin)
    # Steps at nodes other than origin/destination would be relay work; the
    # validator rejects those, but route any survivor to the decode side.
    return pre, post


def run_callflow(
    cf: Callflow,
    p: CostParams,
    w: Workload,
    seed: int = 0,
) -> CallflowStats:
    """Execute ``cf`` for every UE in ``w`` and return stats plus trace."""
    report = validate_callflow(cf)
    if report.structural_violations:
        raise InvalidCallflowError(report)
    if w.variant is not None and w.variant is not cf.variant:
        raise ParameterError(
            f"workload variant {w.variant.value} does not match callflow {cf.variant.value}"
        )

    hop_ms = p.m * p.alpha
    programs = [(m, *_split_steps(m)) for m in cf.messages]

    nodes: dict[tuple[NodeKind, int], NodeState] = {}

    def node_for(kind: NodeKind, flow: _UeFlow) -> NodeState:
        if kind is NodeKind.UE:
            key = (kind, flow.ue)
        elif kind in (NodeKind.GNB, NodeKind.DNB):
            key = (kind, flow.bs)
        else:
            key = (kind, 0)
        st = nodes.get(key)
        if st is None:
            st = nodes[key] = NodeState(key[0], key[1])
        return st

    arrivals = {ue: t for ue, t in enumerate(w.arrival.times(w.ue_count, seed))}
    flows = {ue: _UeFlow(ue, ue % w.base_stations) for ue in range(w.ue_count)}

    heap: list[tuple] = []
    seq = 0

    def push(time_ms: float, tag: int, ue: int, payload=None):
        nonlocal seq
        heapq.heappush(heap, (time_ms, seq, tag, ue, payload))
        seq += 1

    trace: list[SimEvent] = []
    completions: dict[int, float] = {}
    finish_times: dict[int, float] = {}

    def record(time_ms, kind, ue, node, message, detail):
        trace.append(SimEvent(time_ms, len(trace), kind, ue, node, message, detail))

    def advance(flow: _UeFlow, now: float):
        """Schedule the next piece of work for a UE, or finish it."""
        while True:
            if flow.msg_idx >= len(programs):
                finish_times[flow.ue] = now
                completions[flow.ue] = now - arrivals[flow.ue]
                record(now, EventKind.PROCEDURE_COMPLETE, flow.ue, "", "", "")
                return
            msg, pre, post = programs[flow.msg_idx]
            if flow.stage == 0:
                if flow.sub_idx < len(pre):
                    push(now, _STEP_REQUEST, flow.ue, pre[flow.sub_idx])
                    return
                flow.stage, flow.sub_idx = 1, 0
            elif flow.stage == 1:
                if flow.sub_idx < len(msg.hops):
                    push(now + hop_ms, _HOP_ARRIVAL, flow.ue, flow.sub_idx)
                    return
                flow.stage, flow.sub_idx = 2, 0
            else:
                if flow.sub_idx < len(post):
                    push(now, _STEP_REQUEST, flow.ue, post[flow.sub_idx])
                    return
                flow.msg_idx += 1
                flow.stage, flow.sub_idx = 0, 0

    for ue, t in arrivals.items():
        push(t, _START, ue)

    while heap:
        now, _, tag, ue, payload = heapq.heappop(heap)
        flow = flows[ue]
        msg = programs[flow.msg_idx][0] if flow.msg_idx < len(programs) else None
        if tag == _START:
            advance(flow, now)
        elif tag == _STEP_REQUEST:
            node = node_for(payload.node, flow)
            start = max(now, node.busy_until)
            node.busy_until = start + p.beta
            node.queue.append((ue, payload))
            push(start + p.beta, _STEP_DONE, ue, (payload, node))
        elif tag == _STEP_DONE:
            step, node = payload
            node.queue.popleft()
            node.steps_served += 1
            record(
                now,
                EventKind.PROCESSING_COMPLETE,
                ue,
                node.name,
                msg.uid,
                step.name.lower(),
            )
            flow.sub_idx += 1
            advance(flow, now)
        elif tag == _HOP_ARRIVAL:
            hop_idx = payload
            dest = msg.hops[hop_idx][1]
            node = node_for(dest, flow)
            record(
                now,
                EventKind.MESSAGE_ARRIVAL,
                ue,
                node.name,
                msg.uid,
                f"hop{hop_idx}",
            )
            flow.sub_idx += 1
            advance(flow, now)

    return CallflowStats(
        variant=cf.variant,
        arrivals=arrivals,
        completions=completions,
        finish_times=finish_times,
        trace=tuple(trace),
    )


def trace_digest(trace) -> str:
    """Order-sensitive SHA-256 fingerprint of an event trace."""
    h = hashlib.sha256()
    for ev in trace:
        h.update(ev.line().encode())
        h.update(b"\n")
    return h.hexdigest()


def export_trace_jsonl(trace) -> str:
    """Trace as line-delimited JSON records."""
    lines = []
    for ev in trace:
        lines.append(
            json.dumps(
                {
                    "time_ms": ev.time_ms,
                    "seq": ev.seq,
                    "kind": ev.kind.value,
                    "ue": ev.ue,
                    "node": ev.node,
                    "message": ev.message,
                    "detail": ev.detail,
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


STATS_CSV_COLUMNS = ("ue", "arrival_ms", "completion_ms")


def stats_csv(stats: CallflowStats) -> str:
    """Per-UE arrival and completion latencies as CSV."""
    lines = [",".join(STATS_CSV_COLUMNS)]
    for ue in sorted(stats.completions):
        lines.append(f"{ue},{stats.arrivals[ue]!r},{stats.completions[ue]!r}")
    return "\n".join(lines) + "\n"
