"""Ingestion of a decoded trace into an immutable, indexed dataset store.

Ingestion builds three tables -- objects, reference edges, method calls --
plus a per-(object, field) access log. Reference edges carry half-open
validity intervals [start, end): a store event closes the previous edge of
the same slot and opens a new one at the same timestamp, and edges still
open when the trace ends are closed at last event time + 1 so that "held at
end of program" still counts as a live interval.

The resulting DatasetStore is read-only; any number of evaluations may run
against it concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .events import (
    Alloc,
    FieldLoad,
    FieldStore,
    MethodEnter,
    MethodExit,
    TraceEvent,
    VarLoad,
    VarStore,
    object_mentions,
)

UNKNOWN_CLASS = "<unknown>"

READ = "R"
WRITE = "W"

FIELD = "field"
VAR = "var"

OBJECT_VARIABLES = (
    "klass",
    "allocationSite",
    "thread",
    "firstusage",
    "lastusage",
    "lifeTime",
    "log10lifeTime",
)
CATEGORICAL_VARIABLES = ("klass", "allocationSite", "thread")
NUMERICAL_VARIABLES = ("firstusage", "lastusage", "lifeTime", "log10lifeTime")


class IngestError(Exception):
    pass


@dataclass(frozen=True)
class ObjectRecord:
    id: int
    klass: str
    alloc_file: str | None  # None when the allocation site is unknown
    alloc_line: int | None
    thread: str
    firstusage: int
    lastusage: int
    construction_end: int

    @property
    def lifetime(self) -> int:
        return self.lastusage - self.firstusage

    @property
    def allocation_site(self) -> str:
        if self.alloc_file is None:
            return UNKNOWN_CLASS
        return f"{self.alloc_file}:{self.alloc_line}"


@dataclass(frozen=True)
class RefEdge:
    source: int  # 0 for static frames
    target: int
    kind: str  # FIELD or VAR
    name: str  # field name, or "var:<slot>@<class>.<method>"
    start: int
    end: int  # half-open; open edges are closed at last event time + 1
    callsite_file: str | None = None
    callsite_line: int | None = None


@dataclass(frozen=True)
class CallRecord:
    callee: int  # 0 for static methods
    klass: str
    method: str
    enter: int
    exit: int | None  # None when the trace ends inside the call


class DatasetStore:
    """Immutable post-ingestion tables plus the indexes evaluation uses."""

    def __init__(
        self,
        name: str,
        objects: dict[int, ObjectRecord],
        edges: tuple[RefEdge, ...],
        calls: tuple[CallRecord, ...],
        field_access: dict[tuple[int, str], tuple[tuple[int, str], ...]],
        event_count: int,
        last_time: int,
    ):
        self.name = name
        self.objects = objects
        self.edges = edges
        self.calls = calls
        self.field_access = field_access
        self.event_count = event_count
        self.last_time = last_time
        self.universe: frozenset[int] = frozenset(objects)

        out_any: dict[int, set[int]] = {}
        out_field: dict[int, set[int]] = {}
        in_any: dict[int, set[int]] = {}
        in_field: dict[int, set[int]] = {}
        tgt_any: dict[int, list[tuple[int, int]]] = {}
        tgt_field: dict[int, list[tuple[int, int]]] = {}
        for e in edges:
            tgt_any.setdefault(e.target, []).append((e.start, e.end))
            if e.kind == FIELD:
                tgt_field.setdefault(e.target, []).append((e.start, e.end))
            if e.source != 0:
                out_any.setdefault(e.source, set()).add(e.target)
                in_any.setdefault(e.target, set()).add(e.source)
                if e.kind == FIELD:
                    out_field.setdefault(e.source, set()).add(e.target)
                    in_field.setdefault(e.target, set()).add(e.source)
        self.out_any = {k: frozenset(v) for k, v in out_any.items()}
        self.out_field = {k: frozenset(v) for k, v in out_field.items()}
        self.in_any = {k: frozenset(v) for k, v in in_any.items()}
        self.in_field = {k: frozenset(v) for k, v in in_field.items()}
        self.target_intervals_any = tgt_any
        self.target_intervals_field = tgt_field

    @property
    def class_count(self) -> int:
        return len({rec.klass for rec in self.objects.values()})


class _ObjectState:
    __slots__ = (
        "klass", "alloc_file", "alloc_line", "thread",
        "first", "last", "allocated", "construction_end", "init_seen",
    )

    def __init__(self, thread: str, time: int):
        self.klass = UNKNOWN_CLASS
        self.alloc_file: str | None = None
        self.alloc_line: int | None = None
        self.thread = thread
        self.first = time
        self.last = time
        self.allocated = False
        self.construction_end: int | None = None
        self.init_seen = False


def ingest(events: list[TraceEvent], name: str) -> DatasetStore:
    """Build a DatasetStore from a decoded event sequence.

    Objects first seen in a non-Alloc event are registered with class
    "<unknown>" and no allocation site. A second Alloc for the same id is an
    IngestError.
    """
    states: dict[int, _ObjectState] = {}
    edges: list[list] = []  # [source, target, kind, name, start, end, cs_file, cs_line]
    open_edges: dict[tuple[int, str, str], int] = {}  # (source, kind, name) -> edge idx
    calls: list[list] = []  # [callee, klass, method, enter, exit]
    stacks: dict[str, list[tuple[int, str, str, int, int]]] = {}  # frames + call idx
    access: dict[tuple[int, str], list[tuple[int, str]]] = {}
    last_time = 0

    def touch(obj: int, thread: str, time: int) -> _ObjectState:
        state = states.get(obj)
        if state is None:
            state = _ObjectState(thread, time)
            states[obj] = state
        else:
            state.last = time
        return state

    def close_edge(source: int, kind: str, name: str, time: int) -> None:
        idx = open_edges.pop((source, kind, name), None)
        if idx is not None:
            edges[idx][5] = time

    def open_edge(
        source: int, target: int, kind: str, name: str, time: int,
        cs_file: str | None = None, cs_line: int | None = None,
    ) -> None:
        open_edges[(source, kind, name)] = len(edges)
        edges.append([source, target, kind, name, time, None, cs_file, cs_line])

    count = 0
    for ev in events:
        count += 1
        t = ev.time
        last_time = t
        for obj in object_mentions(ev):
            touch(obj, ev.thread, t)

        if isinstance(ev, Alloc):
            if ev.obj == 0:
                raise IngestError(f"Alloc with reserved null id 0 at time {t}")
            state = states[ev.obj]
            if state.allocated:
                raise IngestError(f"duplicate Alloc for object {ev.obj} at time {t}")
            state.allocated = True
            state.klass = ev.klass
            state.alloc_file = ev.alloc_file
            state.alloc_line = ev.alloc_line
            state.thread = ev.thread
        elif isinstance(ev, MethodEnter):
            stack = stacks.setdefault(ev.thread, [])
            calls.append([ev.callee, ev.klass, ev.method, t, None])
            stack.append((ev.callee, ev.klass, ev.method, t, len(calls) - 1))
            if ev.method == "<init>" and ev.callee != 0:
                state = states[ev.callee]
                if state.construction_end is None and not state.init_seen:
                    state.init_seen = True
        elif isinstance(ev, MethodExit):
            stack = stacks.get(ev.thread)
            if stack:
                callee, klass, method, _enter, call_idx = stack.pop()
                calls[call_idx][4] = t
                if method == "<init>" and callee != 0:
                    state = states[callee]
                    if state.init_seen and state.construction_end is None:
                        state.construction_end = t
        elif isinstance(ev, FieldStore):
            access.setdefault((ev.caller, ev.field), []).append((t, WRITE))
            close_edge(ev.caller, FIELD, ev.field, t)
            if ev.newval != 0:
                open_edge(
                    ev.caller, ev.newval, FIELD, ev.field, t,
                    ev.callsite_file, ev.callsite_line,
                )
        elif isinstance(ev, FieldLoad):
            access.setdefault((ev.caller, ev.field), []).append((t, READ))
        elif isinstance(ev, VarStore):
            slot_name = f"var:{ev.var}@{ev.caller_class}.{ev.caller_method}"
            close_edge(ev.caller_tag, VAR, slot_name, t)
            if ev.newval != 0:
                open_edge(ev.caller_tag, ev.newval, VAR, slot_name, t)
        # VarLoad only contributes usage mentions

    for (_source, _kind, _name), idx in open_edges.items():
        edges[idx][5] = last_time + 1

    records: dict[int, ObjectRecord] = {}
    for obj, state in sorted(states.items()):
        if state.construction_end is not None:
            construction_end = state.construction_end
        elif state.init_seen:
            # constructor never returned before the trace ended
            construction_end = last_time + 1
        else:
            construction_end = state.first
        records[obj] = ObjectRecord(
            id=obj,
            klass=state.klass,
            alloc_file=state.alloc_file,
            alloc_line=state.alloc_line,
            thread=state.thread,
            firstusage=state.first,
            lastusage=state.last,
            construction_end=construction_end,
        )

    return DatasetStore(
        name=name,
        objects=records,
        edges=tuple(RefEdge(*row) for row in edges),
        calls=tuple(CallRecord(c[0], c[1], c[2], c[3], c[4]) for c in calls),
        field_access={k: tuple(v) for k, v in access.items()},
        event_count=count,
        last_time=last_time,
    )


def object_variable(store: DatasetStore, obj: int, variable: str):
    """Project one object variable; categorical ones come back as text."""
    rec = store.objects.get(obj)
    if rec is None:
        raise KeyError(f"unknown object id {obj}")
    if variable == "klass":
        return rec.klass
    if variable == "allocationSite":
        return rec.allocation_site
    if variable == "thread":
        return rec.thread
    if variable == "firstusage":
        return rec.firstusage
    if variable == "lastusage":
        return rec.lastusage
    if variable == "lifeTime":
        return rec.lifetime
    if variable == "log10lifeTime":
        return math.log10(rec.lifetime + 1)
    raise KeyError(f"unknown object variable {variable!r}")
