"""The object-selection query language: AST, parser, printer, canonical form.

Grammar (spaces URL-encode to %20 when queries travel in URLs):

    Query := Name "(" Args? ")"
    Args  := Query (" "+ Query)*        for combinators
           | dotted class name          for InstanceOf
           | nothing                    for the other primitives

Canonicalization recursively sorts and deduplicates And/Or children by
their canonical text. It performs no semantic rewriting beyond that, so two
queries share a cache entry exactly when they are the same tree modulo
And/Or child order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

#: primitives take no argument
PRIMITIVES = frozenset(
    {
        "Obj",
        "MutableObj",
        "ImmutableObj",
        "StationaryObj",
        "TinyObj",
        "UniqueObj",
        "HeapUniqueObj",
        "StackBoundObj",
        "AgeOrderedObj",
        "ReverseAgeOrderedObj",
    }
)
#: combinators taking exactly one subquery
UNARY = frozenset(
    {
        "RefersTo",
        "HeapRefersTo",
        "ReferredFrom",
        "HeapReferredFrom",
        "ReachableFrom",
        "HeapReachableFrom",
        "CanReach",
        "CanHeapReach",
        "Deeply",
        "HeapDeeply",
        "Not",
    }
)
#: combinators taking one or more subqueries
VARIADIC = frozenset({"And", "Or"})

ALL_NAMES = PRIMITIVES | UNARY | VARIADIC | {"InstanceOf"}

_CLASS_FORBIDDEN = set(" ()/")


@dataclass(frozen=True)
class Query:
    name: str
    args: tuple["Query", ...] = ()
    klass: str | None = None  # InstanceOf only

    def __post_init__(self):
        if self.name == "InstanceOf":
            if self.klass is None or self.args:
                raise ValueError("InstanceOf takes exactly one class name")
        elif self.name in PRIMITIVES:
            if self.args or self.klass is not None:
                raise ValueError(f"{self.name} takes no arguments")
        elif self.name in UNARY:
            if len(self.args) != 1 or self.klass is not None:
                raise ValueError(f"{self.name} takes exactly one subquery")
        elif self.name in VARIADIC:
            if not self.args or self.klass is not None:
                raise ValueError(f"{self.name} takes at least one subquery")
        else:
            raise ValueError(f"unknown query {self.name!r}")


def to_text(q: Query) -> str:
    """Print a query preserving argument order."""
    if q.name == "InstanceOf":
        return f"InstanceOf({q.klass})"
    return f"{q.name}({' '.join(to_text(a) for a in q.args)})"


def canonicalize(q: Query) -> str:
    """Canonical text: And/Or children deduplicated and sorted recursively."""
    if q.name == "InstanceOf":
        return f"InstanceOf({q.klass})"
    parts = [canonicalize(a) for a in q.args]
    if q.name in VARIADIC:
        parts = sorted(set(parts))
    return f"{q.name}({' '.join(parts)})"


class QueryParseError(Exception):
    """Parse failure with the character offset where it happened."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass
class _Parser:
    text: str
    pos: int = field(default=0)

    def error(self, message: str, offset: int | None = None):
        raise QueryParseError(message, self.pos if offset is None else offset)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_name(self) -> tuple[str, int]:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected a query name")
        return self.text[start:self.pos], start

    def parse_query(self) -> Query:
        name, start = self.parse_name()
        if name not in ALL_NAMES:
            self.error(f"unknown query {name!r}", start)
        if self.peek() != "(":
            self.error(f"expected '(' after {name}")
        self.pos += 1
        if name == "InstanceOf":
            return self.parse_instanceof(start)
        if name in PRIMITIVES:
            if self.peek() != ")":
                self.error(f"{name} takes no arguments")
            self.pos += 1
            return Query(name)
        args = [] if self.peek() == ")" else [self.parse_query()]
        while self.peek() == " ":
            while self.peek() == " ":
                self.pos += 1
            args.append(self.parse_query())
        if self.peek() != ")":
            self.error("expected ')'" if self.peek() == "" else f"unexpected {self.peek()!r}")
        close = self.pos
        self.pos += 1
        if name in UNARY and len(args) != 1:
            self.error(f"{name} takes exactly one subquery, got {len(args)}", close)
        if name in VARIADIC and not args:
            self.error(f"{name} takes at least one subquery", close)
        return Query(name, tuple(args))

    def parse_instanceof(self, start: int) -> Query:
        arg_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] != ")":
            if self.text[self.pos] in _CLASS_FORBIDDEN:
                self.error(f"invalid character {self.text[self.pos]!r} in class name")
            self.pos += 1
        if self.pos == len(self.text):
            self.error("expected ')'")
        klass = self.text[arg_start:self.pos]
        if not klass:
            self.error("InstanceOf needs a class name", arg_start)
        self.pos += 1
        return Query("InstanceOf", klass=klass)


def parse(text: str) -> Query:
    """Parse query text; raises QueryParseError with a character offset."""
    parser = _Parser(text)
    query = parser.parse_query()
    if parser.pos != len(text):
        parser.error(f"trailing input {text[parser.pos:]!r}")
    return query


# -- convenience constructors used throughout tests and analytics ----------

def q_and(*args: Query) -> Query:
    return Query("And", tuple(args))

def q_or(*args: Query) -> Query:
    return Query("Or", tuple(args))

def q_not(arg: Query) -> Query:
    return Query("Not", (arg,))

def instance_of(klass: str) -> Query:
    return Query("InstanceOf", klass=klass)
