"""A tiny heap-manipulating script language and its tracing interpreter.

Programs are straight-line, single-threaded statement sequences grouped into
named procedures ("main" is the entry point). Running a program yields the
same event stream a bytecode-instrumented runtime would emit for it: Alloc
plus a synthetic "<init>" enter/exit pair for New, FieldStore with oldval
chaining, FieldLoad, VarLoad/VarStore, and MethodEnter/MethodExit around
Call. Event times are dense, starting at 1.

Variables share one namespace; the name "null" is pre-bound to the null
reference. New and LoadField bind their target variable without emitting a
variable event; StoreVar emits a VarLoad of the source followed by a
VarStore of the target, both attributed to the executing frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .events import (
    Alloc,
    FieldLoad,
    FieldStore,
    MethodEnter,
    MethodExit,
    TraceEvent,
    VarLoad,
    VarStore,
)

THREAD = "main"


@dataclass(frozen=True)
class New:
    klass: str
    target: str


@dataclass(frozen=True)
class StoreField:
    obj: str
    field: str
    value: str


@dataclass(frozen=True)
class LoadField:
    obj: str
    field: str
    target: str


@dataclass(frozen=True)
class StoreVar:
    target: str
    source: str


@dataclass(frozen=True)
class Call:
    obj: str
    method: str


@dataclass(frozen=True)
class Return:
    pass


Statement = New | StoreField | LoadField | StoreVar | Call | Return


@dataclass
class ToyProgram:
    name: str = "Main"
    classes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    procedures: dict[str, list[Statement]] = field(default_factory=dict)

    @property
    def source_file(self) -> str:
        return f"{self.name}.toy"


class ProgramError(Exception):
    """Raised for invalid programs; names the offending procedure and statement."""

    def __init__(self, message: str, procedure: str, index: int):
        super().__init__(f"{procedure}[{index}]: {message}")
        self.procedure = procedure
        self.index = index


class _Run:
    def __init__(self, program: ToyProgram):
        self.program = program
        self.events: list[TraceEvent] = []
        self.time = 0
        self.vars: dict[str, int] = {"null": 0}
        self.heap: dict[tuple[int, str], int] = {}
        self.klass_of: dict[int, str] = {}
        self.next_id = 1
        self.slots: dict[str, int] = {}
        # (tag, class, method) of the active frame; main runs as a static frame
        self.frames: list[tuple[int, str, str]] = [(0, program.name, "main")]
        self.lines = self._number_statements(program)

    @staticmethod
    def _number_statements(program: ToyProgram) -> dict[tuple[str, int], int]:
        lines: dict[tuple[str, int], int] = {}
        line = 0
        for proc, stmts in program.procedures.items():
            for i in range(len(stmts)):
                line += 1
                lines[(proc, i)] = line
        return lines

    def emit(self, make) -> None:
        self.time += 1
        self.events.append(make(self.time))

    def slot(self, var: str) -> int:
        if var not in self.slots:
            if len(self.slots) >= 256:
                raise ProgramError("too many distinct variables", "<slots>", len(self.slots))
            self.slots[var] = len(self.slots)
        return self.slots[var]

    def lookup(self, var: str, proc: str, index: int) -> int:
        try:
            return self.vars[var]
        except KeyError:
            raise ProgramError(f"use of unassigned variable {var!r}", proc, index) from None

    def lookup_object(self, var: str, proc: str, index: int) -> int:
        val = self.lookup(var, proc, index)
        if val == 0:
            raise ProgramError(f"variable {var!r} holds null", proc, index)
        return val

    def run_procedure(self, proc: str, depth: int) -> None:
        if depth > 64:
            raise ProgramError("call depth exceeded", proc, 0)
        try:
            body = self.program.procedures[proc]
        except KeyError:
            raise ProgramError(f"unknown procedure {proc!r}", proc, 0) from None
        for index, stmt in enumerate(body):
            if isinstance(stmt, Return):
                return
            self.exec_statement(stmt, proc, index, depth)

    def exec_statement(self, stmt: Statement, proc: str, index: int, depth: int) -> None:
        program = self.program
        line = self.lines.get((proc, index), 0)
        if isinstance(stmt, New):
            if stmt.klass not in program.classes:
                raise ProgramError(f"unknown class {stmt.klass!r}", proc, index)
            obj = self.next_id
            self.next_id += 1
            self.klass_of[obj] = stmt.klass
            self.emit(lambda t: Alloc(t, THREAD, obj, stmt.klass, program.source_file, line))
            self.emit(lambda t: MethodEnter(t, THREAD, obj, stmt.klass, "<init>"))
            self.emit(lambda t: MethodExit(t, THREAD, obj, stmt.klass, "<init>"))
            self.vars[stmt.target] = obj
        elif isinstance(stmt, StoreField):
            obj = self.lookup_object(stmt.obj, proc, index)
            val = self.lookup(stmt.value, proc, index)
            old = self.heap.get((obj, stmt.field), 0)
            self.heap[(obj, stmt.field)] = val
            self.emit(
                lambda t: FieldStore(
                    t, THREAD, obj, stmt.field, old, val, program.source_file, line
                )
            )
        elif isinstance(stmt, LoadField):
            obj = self.lookup_object(stmt.obj, proc, index)
            val = self.heap.get((obj, stmt.field), 0)
            self.emit(lambda t: FieldLoad(t, THREAD, obj, stmt.field, val))
            self.vars[stmt.target] = val
        elif isinstance(stmt, StoreVar):
            val = self.lookup(stmt.source, proc, index)
            old = self.vars.get(stmt.target, 0)
            tag, klass, method = self.frames[-1]
            src_slot = self.slot(stmt.source)
            dst_slot = self.slot(stmt.target)
            self.emit(lambda t: VarLoad(t, THREAD, method, klass, tag, src_slot, val))
            self.emit(lambda t: VarStore(t, THREAD, method, klass, tag, dst_slot, old, val))
            self.vars[stmt.target] = val
        elif isinstance(stmt, Call):
            obj = self.lookup_object(stmt.obj, proc, index)
            klass = self.klass_of.get(obj, "<unknown>")
            self.emit(lambda t: MethodEnter(t, THREAD, obj, klass, stmt.method))
            self.frames.append((obj, klass, stmt.method))
            self.run_procedure(stmt.method, depth + 1)
            self.frames.pop()
            self.emit(lambda t: MethodExit(t, THREAD, obj, klass, stmt.method))
        else:
            raise ProgramError(f"cannot execute {type(stmt).__name__}", proc, index)


def run_program(program: ToyProgram) -> list[TraceEvent]:
    """Interpret `program` starting at procedure "main" and return its trace."""
    run = _Run(program)
    run.run_procedure("main", 0)
    return run.events
