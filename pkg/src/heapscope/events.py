"""Event vocabulary for object-level program traces.

A trace is an ordered sequence of events with strictly increasing logical
times (dense indexes starting at 1). Object ids are positive integers;
0 stands for the null reference and for static (objectless) frames.
"""

from __future__ import annotations

from dataclasses import dataclass

NULL_REF = 0


@dataclass(frozen=True)
class Alloc:
    time: int
    thread: str
    obj: int
    klass: str
    alloc_file: str
    alloc_line: int


@dataclass(frozen=True)
class MethodEnter:
    time: int
    thread: str
    callee: int  # 0 for static frames
    klass: str
    method: str  # constructors are named "<init>"


@dataclass(frozen=True)
class MethodExit:
    time: int
    thread: str
    callee: int
    klass: str
    method: str


@dataclass(frozen=True)
class FieldStore:
    time: int
    thread: str
    caller: int
    field: str
    oldval: int  # previous value of (caller, field), 0 if none
    newval: int
    callsite_file: str
    callsite_line: int


@dataclass(frozen=True)
class FieldLoad:
    time: int
    thread: str
    caller: int
    field: str
    value: int


@dataclass(frozen=True)
class VarStore:
    time: int
    thread: str
    caller_method: str
    caller_class: str
    caller_tag: int  # owning object of the frame, 0 for static frames
    var: int  # variable slot, 0..255
    oldval: int
    newval: int


@dataclass(frozen=True)
class VarLoad:
    time: int
    thread: str
    caller_method: str
    caller_class: str
    caller_tag: int
    var: int
    value: int


TraceEvent = Alloc | MethodEnter | MethodExit | FieldStore | FieldLoad | VarStore | VarLoad

#: Wire tags, also the order of the payload layouts in the codec.
EVENT_KINDS: tuple[type, ...] = (
    Alloc,
    MethodEnter,
    MethodExit,
    FieldStore,
    FieldLoad,
    VarStore,
    VarLoad,
)


def object_mentions(event: TraceEvent):
    """Yield every nonzero object id appearing in the event's payload."""
    if isinstance(event, Alloc):
        ids = (event.obj,)
    elif isinstance(event, (MethodEnter, MethodExit)):
        ids = (event.callee,)
    elif isinstance(event, FieldStore):
        ids = (event.caller, event.oldval, event.newval)
    elif isinstance(event, FieldLoad):
        ids = (event.caller, event.value)
    elif isinstance(event, VarStore):
        ids = (event.caller_tag, event.oldval, event.newval)
    else:
        ids = (event.caller_tag, event.value)
    for i in ids:
        if i != NULL_REF:
            yield i
