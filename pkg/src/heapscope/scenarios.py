"""Built-in deterministic trace scenarios.

Four desk-scale datasets cover the shapes the analyses care about:

* ``t0-minimal``     -- a fixed 7-event trace used as the golden example
                        throughout the test suite.
* ``string-like``    -- immutable "Str" wrappers over char-array-like
                        "CharArr" objects that are fully written before first
                        read, plus "StrBuffer" objects that share one CharArr
                        among two Strs.
* ``linkedlist-like``-- a doubly-linked list whose nodes are mutated and
                        aliased after construction.
* ``random-soup``    -- a seeded random but valid toy program with
                        parameterizable object and event counts.

Identical (name, seed, objects, events) always produce byte-identical
trace files.
"""

from __future__ import annotations

import random

from .events import (
    Alloc,
    FieldLoad,
    FieldStore,
    MethodEnter,
    MethodExit,
    TraceEvent,
)
from .toyprogram import (
    Call,
    LoadField,
    New,
    Return,
    StoreField,
    StoreVar,
    ToyProgram,
    run_program,
)

SCENARIO_NAMES = ("t0-minimal", "string-like", "linkedlist-like", "random-soup")

DEFAULT_SOUP_OBJECTS = 50
DEFAULT_SOUP_EVENTS = 500


class TraceBuilder:
    """Hand-assembles event streams with dense times and oldval chaining.

    Unlike the toy interpreter, the builder gives full control over where
    field stores fall relative to constructor windows.
    """

    def __init__(self, source_file: str = "Main.toy", thread: str = "main"):
        self.events: list[TraceEvent] = []
        self.source_file = source_file
        self.thread = thread
        self._time = 0
        self._next_id = 1
        self._heap: dict[tuple[int, str], int] = {}
        self._klass: dict[int, str] = {}

    def _t(self) -> int:
        self._time += 1
        return self._time

    def alloc(self, klass: str, line: int = 0, init: bool = True) -> int:
        obj = self._next_id
        self._next_id += 1
        self._klass[obj] = klass
        self.events.append(Alloc(self._t(), self.thread, obj, klass, self.source_file, line))
        if init:
            self.enter(obj, "<init>")
            self.exit(obj, "<init>")
        return obj

    def enter(self, obj: int, method: str) -> None:
        self.events.append(
            MethodEnter(self._t(), self.thread, obj, self._klass.get(obj, "<unknown>"), method)
        )

    def exit(self, obj: int, method: str) -> None:
        self.events.append(
            MethodExit(self._t(), self.thread, obj, self._klass.get(obj, "<unknown>"), method)
        )

    def store(self, obj: int, fieldname: str, value: int, line: int = 0) -> None:
        old = self._heap.get((obj, fieldname), 0)
        self._heap[(obj, fieldname)] = value
        self.events.append(
            FieldStore(self._t(), self.thread, obj, fieldname, old, value, self.source_file, line)
        )

    def load(self, obj: int, fieldname: str) -> int:
        value = self._heap.get((obj, fieldname), 0)
        self.events.append(FieldLoad(self._t(), self.thread, obj, fieldname, value))
        return value


def t0_minimal() -> list[TraceEvent]:
    """The fixed 7-event golden trace: o1 of class A stores, reads, and clears
    a reference to o2 of class B; the first store happens inside o1's
    constructor, the clearing store after it."""
    b = TraceBuilder()
    o1 = b.alloc("A", line=3, init=False)
    b.enter(o1, "<init>")
    o2 = b.alloc("B", line=4, init=False)
    b.store(o1, "f", o2, line=5)
    b.exit(o1, "<init>")
    b.load(o1, "f")
    b.store(o1, "f", 0, line=7)
    return b.events


def string_like(seed: int) -> list[TraceEvent]:
    """Immutable wrappers sharing or owning fully pre-initialised arrays.

    Every CharArr that a Str refers to is written before its first read, so
    all of them are stationary. Private arrays have exactly one heap
    reference; each StrBuffer's array is shared by the buffer and two Strs
    at the same time, so those arrays are not heap-unique.
    """
    rng = random.Random(seed)
    b = TraceBuilder(source_file="Strings.toy")
    line = 0

    def make_array(cells: int) -> int:
        nonlocal line
        line += 1
        arr = b.alloc("CharArr", line=line)
        for c in range(cells):
            # primitive cell writes carry no object reference
            b.store(arr, f"[{c}]", 0, line=line)
        return arr

    def make_str(arr: int) -> int:
        nonlocal line
        line += 1
        s = b.alloc("Str", line=line, init=False)
        b.enter(s, "<init>")
        b.store(s, "value", arr, line=line)
        b.exit(s, "<init>")
        return s

    arrays: list[int] = []
    for _ in range(3 + rng.randrange(3)):
        arr = make_array(2 + rng.randrange(3))
        make_str(arr)
        arrays.append(arr)

    for _ in range(2):
        line += 1
        buf = b.alloc("StrBuffer", line=line)
        arr = make_array(2 + rng.randrange(3))
        b.store(buf, "value", arr, line=line)
        make_str(arr)
        make_str(arr)
        arrays.append(arr)

    for arr in arrays:  # reads come after every write
        b.load(arr, "[0]")
        b.load(arr, "[1]")
    return b.events


def linkedlist_program(seed: int) -> ToyProgram:
    """Appends nodes to a doubly-linked list, then walks it."""
    n_nodes = 3 + seed % 3
    main: list = [New("List", "lst")]
    for i in range(n_nodes):
        node = f"n{i}"
        main.append(New("Node", node))
        if i == 0:
            main.append(StoreField("lst", "first", node))
            main.append(StoreField("lst", "last", node))
        else:
            main.append(LoadField("lst", "last", "tail"))
            main.append(StoreField("tail", "next", node))
            main.append(StoreField(node, "prev", "tail"))
            main.append(StoreField("lst", "last", node))
    main.append(LoadField("lst", "first", "cur"))
    for _ in range(n_nodes - 1):
        main.append(LoadField("cur", "next", "cur"))
    main.append(StoreVar("alias", "cur"))
    return ToyProgram(
        name="Lists",
        classes={"List": ("first", "last"), "Node": ("prev", "next")},
        procedures={"main": main},
    )


def linkedlist_like(seed: int) -> list[TraceEvent]:
    return run_program(linkedlist_program(seed))


_SOUP_CLASSES = {
    "C0": ("a", "b", "next"),
    "C1": ("a", "val", "[0]"),
    "C2": ("next", "prev", "val"),
    "C3": ("a", "b", "[0]", "[1]"),
}


def _soup_procedures(rng: random.Random) -> dict[str, list]:
    """Small straight-line helper procedures over the anchor objects g0/g1."""
    procs: dict[str, list] = {}
    fields = [f for fs in _SOUP_CLASSES.values() for f in fs]
    for k, name in enumerate(("poke", "fill", "mix")):
        body: list = []
        local = f"t{k}"
        body.append(New(rng.choice(list(_SOUP_CLASSES)), local))
        for _ in range(rng.randrange(1, 4)):
            roll = rng.random()
            if roll < 0.4:
                body.append(StoreField(rng.choice(("g0", "g1", local)), rng.choice(fields), local))
            elif roll < 0.7:
                body.append(LoadField(rng.choice(("g0", "g1")), rng.choice(fields), f"{local}m"))
            else:
                body.append(StoreVar(f"{local}v", local))
        if name == "mix":
            body.insert(rng.randrange(1, len(body) + 1), Call("g0", "poke"))
        if rng.random() < 0.3:
            body.append(Return())
        procs[name] = body
    return procs


def _statement_cost(stmt, procs: dict[str, list]) -> int:
    if isinstance(stmt, New):
        return 3
    if isinstance(stmt, (StoreField, LoadField)):
        return 1
    if isinstance(stmt, StoreVar):
        return 2
    if isinstance(stmt, Call):
        return 2 + _body_cost(procs[stmt.method], procs)
    return 0


def _body_cost(body: list, procs: dict[str, list]) -> int:
    total = 0
    for stmt in body:
        if isinstance(stmt, Return):
            break
        total += _statement_cost(stmt, procs)
    return total


def _statement_objects(stmt, procs: dict[str, list]) -> int:
    if isinstance(stmt, New):
        return 1
    if isinstance(stmt, Call):
        total = 0
        for s in procs[stmt.method]:
            if isinstance(s, Return):
                break
            total += _statement_objects(s, procs)
        return total
    return 0


def random_soup_program(seed: int, objects: int, events: int) -> ToyProgram:
    """Generate a valid random program whose trace lands near the targets.

    Receivers of field and call statements are only ever variables that are
    statically known to hold an object, so the program never dereferences
    null and never reads an unassigned variable.
    """
    rng = random.Random(seed)
    procs = _soup_procedures(rng)
    fields = [f for fs in _SOUP_CLASSES.values() for f in fs]
    classes = list(_SOUP_CLASSES)

    main: list = [New(rng.choice(classes), "g0"), New(rng.choice(classes), "g1")]
    obj_vars = ["g0", "g1"]  # definitely hold an object
    maybe_vars: list[str] = []  # may hold null (loaded from fields)
    made_objects = 2
    made_events = sum(_statement_cost(s, procs) for s in main)

    var_pool = [f"v{i}" for i in range(8)]
    maybe_pool = [f"m{i}" for i in range(4)]

    while made_events < events:
        roll = rng.random()
        if roll < 0.28 and made_objects < objects:
            stmt: object = New(rng.choice(classes), rng.choice(var_pool))
        elif roll < 0.55:
            value = rng.choice(obj_vars + maybe_vars + ["null", "null"])
            stmt = StoreField(rng.choice(obj_vars), rng.choice(fields), value)
        elif roll < 0.75:
            stmt = LoadField(rng.choice(obj_vars), rng.choice(fields), rng.choice(maybe_pool))
        elif roll < 0.88:
            stmt = StoreVar(rng.choice(var_pool + maybe_pool), rng.choice(obj_vars + maybe_vars))
        else:
            if made_objects + 2 > objects:
                continue
            stmt = Call(rng.choice(obj_vars), rng.choice(list(procs)))
        made_events += _statement_cost(stmt, procs)
        made_objects += _statement_objects(stmt, procs)
        main.append(stmt)
        if isinstance(stmt, New) and stmt.target not in obj_vars:
            obj_vars.append(stmt.target)
            if stmt.target in maybe_vars:
                maybe_vars.remove(stmt.target)
        elif isinstance(stmt, LoadField) and stmt.target not in maybe_vars:
            maybe_vars.append(stmt.target)
            if stmt.target in obj_vars:
                obj_vars.remove(stmt.target)
        elif isinstance(stmt, StoreVar):
            definite = stmt.source in obj_vars
            for pool, member in ((obj_vars, definite), (maybe_vars, not definite)):
                if member and stmt.target not in pool:
                    pool.append(stmt.target)
                if not member and stmt.target in pool:
                    pool.remove(stmt.target)

    procedures = {"main": main}
    procedures.update(procs)
    return ToyProgram(name="Soup", classes=dict(_SOUP_CLASSES), procedures=procedures)


def random_soup(seed: int, objects: int | None = None, events: int | None = None) -> list[TraceEvent]:
    return run_program(
        random_soup_program(
            seed,
            objects if objects is not None else DEFAULT_SOUP_OBJECTS,
            events if events is not None else DEFAULT_SOUP_EVENTS,
        )
    )


def builtin_scenario(
    name: str,
    seed: int = 0,
    objects: int | None = None,
    events: int | None = None,
) -> list[TraceEvent]:
    """Return the event sequence of a named scenario.

    Raises ValueError for unknown names; `objects`/`events` only apply to
    random-soup.
    """
    if name == "t0-minimal":
        return t0_minimal()
    if name == "string-like":
        return string_like(seed)
    if name == "linkedlist-like":
        return linkedlist_like(seed)
    if name == "random-soup":
        return random_soup(seed, objects, events)
    raise ValueError(f"unknown scenario {name!r} (choose from {', '.join(SCENARIO_NAMES)})")
