import pytest

from heapscope.codec import encode_trace_bytes
from heapscope.engine import evaluate
from heapscope.events import Alloc, FieldStore, MethodEnter, MethodExit
from heapscope.queries import instance_of, parse
from heapscope.scenarios import builtin_scenario, random_soup, t0_minimal
from heapscope.store import ingest


def test_t0_is_the_seven_event_golden_trace(t0_events):
    assert len(t0_events) == 7
    assert [type(e).__name__ for e in t0_events] == [
        "Alloc", "MethodEnter", "Alloc", "FieldStore",
        "MethodExit", "FieldLoad", "FieldStore",
    ]
    assert t0_events[0] == Alloc(1, "main", 1, "A", "Main.toy", 3)
    assert t0_events[3] == FieldStore(4, "main", 1, "f", 0, 2, "Main.toy", 5)
    assert t0_events[6].oldval == 2 and t0_events[6].newval == 0


def test_t0_scenario_ignores_seed():
    assert builtin_scenario("t0-minimal", 1) == builtin_scenario("t0-minimal", 99)
    assert builtin_scenario("t0-minimal") == t0_minimal()


def test_unknown_scenario_name():
    with pytest.raises(ValueError):
        builtin_scenario("no-such-scenario")


@pytest.mark.parametrize("name", ["string-like", "linkedlist-like", "random-soup"])
@pytest.mark.parametrize("seed", [0, 1, 7])
def test_scenarios_are_deterministic(name, seed):
    first = encode_trace_bytes(builtin_scenario(name, seed))
    second = encode_trace_bytes(builtin_scenario(name, seed))
    assert first == second


def test_soup_respects_targets():
    events = random_soup(3, objects=20, events=300)
    objs = {e.obj for e in events if isinstance(e, Alloc)}
    assert len(objs) <= 20
    assert len(events) >= 300  # budget is a lower bound, overshoot is small
    assert len(events) < 330


@pytest.mark.parametrize("name", ["string-like", "linkedlist-like", "random-soup"])
@pytest.mark.parametrize("seed", [0, 5])
def test_scenario_traces_satisfy_event_invariants(name, seed):
    events = builtin_scenario(name, seed)
    times = [e.time for e in events]
    assert times == list(range(1, len(events) + 1))
    # oldval chaining per (caller, field)
    current: dict = {}
    for e in events:
        if isinstance(e, FieldStore):
            assert e.oldval == current.get((e.caller, e.field), 0)
            current[(e.caller, e.field)] = e.newval
    # method enter/exit nest properly
    stack = []
    for e in events:
        if isinstance(e, MethodEnter):
            stack.append((e.callee, e.method))
        elif isinstance(e, MethodExit):
            assert stack and stack[-1] == (e.callee, e.method)
            stack.pop()
    assert not stack


def test_string_like_arrays_behind_strings_are_stationary(string_store):
    from heapscope.oracle import brute_force_oracle

    referred = brute_force_oracle(string_store, parse("HeapReferredFrom(InstanceOf(Str))"))
    stationary = brute_force_oracle(string_store, parse("StationaryObj()"))
    assert referred and referred <= stationary
    assert referred == set(evaluate(string_store, parse("HeapReferredFrom(InstanceOf(Str))")).objects)


def test_linkedlist_nodes_are_mutable_and_heap_referenced(linked_store):
    nodes = set(evaluate(linked_store, instance_of("Node")).objects)
    assert nodes
    assert nodes <= set(evaluate(linked_store, parse("MutableObj()")).objects)
    assert not nodes & set(evaluate(linked_store, parse("StackBoundObj()")).objects)
