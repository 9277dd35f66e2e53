import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heapscope.queries import (
    Query,
    QueryParseError,
    canonicalize,
    instance_of,
    parse,
    q_and,
    q_not,
    q_or,
    to_text,
)
from helpers import random_query


def test_parse_primitive():
    assert parse("MutableObj()") == Query("MutableObj")


def test_parse_nested_combinator():
    q = parse("And(Not(HeapUniqueObj()) InstanceOf(java.lang.String))")
    assert q == q_and(q_not(Query("HeapUniqueObj")), instance_of("java.lang.String"))


def test_parse_multiple_spaces_between_args():
    assert parse("And(Obj()   TinyObj())") == q_and(Query("Obj"), Query("TinyObj"))


def test_unary_requires_exactly_one_argument():
    with pytest.raises(QueryParseError):
        parse("Deeply()")
    with pytest.raises(QueryParseError):
        parse("Not(Obj() Obj())")


def test_variadic_requires_at_least_one():
    with pytest.raises(QueryParseError):
        parse("And()")


def test_primitive_takes_no_arguments():
    with pytest.raises(QueryParseError):
        parse("TinyObj(Obj())")


def test_unknown_name_offset():
    with pytest.raises(QueryParseError) as exc:
        parse("And(Obj() Frobnicate())")
    assert exc.value.offset == 10


def test_unbalanced_parens():
    with pytest.raises(QueryParseError):
        parse("And(Obj()")
    with pytest.raises(QueryParseError):
        parse("Obj())")


def test_instanceof_handles_dotted_and_odd_names():
    assert parse("InstanceOf(a.b$C)").klass == "a.b$C"
    assert parse("InstanceOf(<unknown>)").klass == "<unknown>"
    with pytest.raises(QueryParseError):
        parse("InstanceOf()")


def test_round_trip_parse_print():
    rng = random.Random(17)
    for _ in range(100):
        q = random_query(rng, 3)
        assert parse(to_text(q)) == q


def test_canonical_sorts_and_or_children():
    a, b = instance_of("a.A"), instance_of("b.B")
    assert canonicalize(q_and(b, a)) == canonicalize(q_and(a, b))
    assert canonicalize(q_or(b, a)) == "Or(InstanceOf(a.A) InstanceOf(b.B))"


def test_canonical_dedupes():
    q = Query("TinyObj")
    assert canonicalize(q_and(q, q)) == "And(TinyObj())"


def test_canonical_does_not_collapse_double_negation():
    q = q_not(q_not(Query("Obj")))
    assert canonicalize(q) == "Not(Not(Obj()))"


def test_canonical_recurses_into_children():
    inner1 = q_or(instance_of("b.B"), instance_of("a.A"))
    inner2 = q_or(instance_of("a.A"), instance_of("b.B"))
    assert canonicalize(q_not(inner1)) == canonicalize(q_not(inner2))


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_canonicalize_is_idempotent_under_permutation(seed):
    rng = random.Random(seed)
    children = [random_query(rng, 2) for _ in range(3)]
    shuffled = children[:]
    rng.shuffle(shuffled)
    assert canonicalize(q_and(*children)) == canonicalize(q_and(*shuffled))
    assert canonicalize(q_or(*children)) == canonicalize(q_or(*shuffled))
