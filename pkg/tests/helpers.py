"""Shared generators for tests: random queries and random event sequences."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from heapscope.events import (
    Alloc,
    FieldLoad,
    FieldStore,
    MethodEnter,
    MethodExit,
    VarLoad,
    VarStore,
)
from heapscope.queries import PRIMITIVES, UNARY, Query, instance_of

SOUP_CLASSES = ["C0", "C1", "C2", "C3", "com.example.Missing"]

_PRIMS = sorted(PRIMITIVES) + ["InstanceOf"]
_UNARIES = sorted(UNARY)


def random_query(rng: random.Random, depth: int, classes: list[str] | None = None) -> Query:
    """A random query tree of at most `depth` levels (depth 1 is a primitive)."""
    classes = classes or SOUP_CLASSES
    if depth <= 1 or rng.random() < 0.3:
        name = rng.choice(_PRIMS)
        if name == "InstanceOf":
            return instance_of(rng.choice(classes))
        return Query(name)
    if rng.random() < 0.6:
        return Query(rng.choice(_UNARIES), (random_query(rng, depth - 1, classes),))
    name = rng.choice(["And", "Or"])
    arity = rng.randrange(1, 4)
    return Query(name, tuple(random_query(rng, depth - 1, classes) for _ in range(arity)))


# hypothesis strategies for arbitrary (but valid) trace event sequences

_text = st.text(min_size=0, max_size=24)
_name = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters="._$<>[]"),
    min_size=1,
    max_size=16,
)
_obj = st.integers(min_value=0, max_value=2**64 - 1)
_line = st.integers(min_value=0, max_value=2**32)
_slot = st.integers(min_value=0, max_value=255)


def _event_body(time: int):
    return st.one_of(
        st.tuples(_text, _obj, _name, _text, _line).map(
            lambda a: Alloc(time, a[0], a[1], a[2], a[3], a[4])
        ),
        st.tuples(_text, _obj, _name, _name).map(
            lambda a: MethodEnter(time, a[0], a[1], a[2], a[3])
        ),
        st.tuples(_text, _obj, _name, _name).map(
            lambda a: MethodExit(time, a[0], a[1], a[2], a[3])
        ),
        st.tuples(_text, _obj, _name, _obj, _obj, _text, _line).map(
            lambda a: FieldStore(time, a[0], a[1], a[2], a[3], a[4], a[5], a[6])
        ),
        st.tuples(_text, _obj, _name, _obj).map(
            lambda a: FieldLoad(time, a[0], a[1], a[2], a[3])
        ),
        st.tuples(_text, _name, _name, _obj, _slot, _obj, _obj).map(
            lambda a: VarStore(time, a[0], a[1], a[2], a[3], a[4], a[5], a[6])
        ),
        st.tuples(_text, _name, _name, _obj, _slot, _obj).map(
            lambda a: VarLoad(time, a[0], a[1], a[2], a[3], a[4], a[5])
        ),
    )


@st.composite
def event_sequences(draw, max_events: int = 40):
    """Sequences with strictly increasing times starting at >= 1."""
    n = draw(st.integers(min_value=0, max_value=max_events))
    times = draw(
        st.lists(
            st.integers(min_value=1, max_value=10_000), min_size=n, max_size=n, unique=True
        )
    )
    times.sort()
    return [draw(_event_body(t)) for t in times]
