import random

import pytest

from heapscope.cache import QueryCache
from heapscope.engine import evaluate
from heapscope.oracle import brute_force_oracle
from heapscope.queries import Query, instance_of, parse, q_and, q_not, q_or
from helpers import random_query


def sel(store, text, cache=None):
    return set(evaluate(store, parse(text), cache).objects)


class TestT0Goldens:
    def test_mutable(self, t0_store):
        # the clearing store at t7 is the only write after o1's constructor
        assert sel(t0_store, "MutableObj()") == {1}

    def test_tiny_and_age_order_vacuity(self, t0_store):
        assert sel(t0_store, "TinyObj()") == {2}
        assert sel(t0_store, "And(AgeOrderedObj() ReverseAgeOrderedObj())") == {2}

    def test_reachability_and_deeply(self, t0_store):
        assert sel(t0_store, "ReachableFrom(InstanceOf(A))") == {1, 2}
        assert sel(t0_store, "Deeply(ImmutableObj())") == {2}

    def test_not_obj_is_empty(self, t0_store):
        assert sel(t0_store, "Not(Obj())") == set()

    def test_unknown_class_selects_nothing(self, t0_store):
        assert sel(t0_store, "InstanceOf(does.not.Exist)") == set()


class TestSelectionResult:
    def test_sorted_unique_ids(self, soup_stores):
        result = evaluate(soup_stores(0), parse("Obj()"))
        assert list(result.objects) == sorted(set(result.objects))

    def test_metadata(self, t0_store):
        cache = QueryCache()
        first = evaluate(t0_store, parse("MutableObj()"), cache)
        again = evaluate(t0_store, parse("MutableObj()"), cache)
        assert first.from_cache is False
        assert again.from_cache is True
        assert first.dataset == "test"
        assert first.canonical_query == "MutableObj()"
        assert first.compute_millis >= 0


class TestAlgebra:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_identities(self, soup_stores, seed):
        store = soup_stores(seed)
        cache = QueryCache()
        rng = random.Random(seed)
        universe = sel(store, "Obj()", cache)
        for _ in range(15):
            q = random_query(rng, 2)
            base = set(evaluate(store, q, cache).objects)
            assert set(evaluate(store, q_not(q_not(q)), cache).objects) == base
            assert set(evaluate(store, q_and(q), cache).objects) == base
            assert set(evaluate(store, q_or(q), cache).objects) == base
            assert set(evaluate(store, q_and(q, q_not(q)), cache).objects) == set()
            assert set(evaluate(store, q_or(q, q_not(q)), cache).objects) == universe

    @pytest.mark.parametrize("seed", [0, 3])
    def test_closure_monotonicity_and_idempotence(self, soup_stores, seed):
        store = soup_stores(seed)
        cache = QueryCache()
        rng = random.Random(seed + 50)
        for _ in range(10):
            q = random_query(rng, 2)
            base = set(evaluate(store, q, cache).objects)
            reach = Query("ReachableFrom", (q,))
            reach_set = set(evaluate(store, reach, cache).objects)
            assert base <= reach_set
            assert base <= set(evaluate(store, Query("CanReach", (q,)), cache).objects)
            deeply = set(evaluate(store, Query("Deeply", (q,)), cache).objects)
            assert deeply <= base
            twice = set(evaluate(store, Query("ReachableFrom", (reach,)), cache).objects)
            assert twice == reach_set

    def test_deeply_obj_is_obj(self, soup_stores):
        store = soup_stores(1)
        assert sel(store, "Deeply(Obj())") == sel(store, "Obj()")

    def test_heap_deeply_equals_deeply_without_var_edges(self, string_store):
        # the string scenario is built without variable stores
        assert all(e.kind == "field" for e in string_store.edges)
        cache = QueryCache()
        for text in ("ImmutableObj()", "InstanceOf(CharArr)", "TinyObj()"):
            assert sel(string_store, f"HeapDeeply({text})", cache) == sel(
                string_store, f"Deeply({text})", cache
            )

    @pytest.mark.parametrize("seed", [0, 2, 4])
    def test_heap_deeply_contains_deeply(self, soup_stores, seed):
        # field-only reachability sees fewer escapes, never more
        store = soup_stores(seed)
        cache = QueryCache()
        rng = random.Random(seed + 13)
        for _ in range(10):
            q = random_query(rng, 2)
            deep = set(evaluate(store, Query("Deeply", (q,)), cache).objects)
            heap_deep = set(evaluate(store, Query("HeapDeeply", (q,)), cache).objects)
            assert deep <= heap_deep

    @pytest.mark.parametrize("seed", range(5))
    def test_strict_age_exclusivity(self, soup_stores, seed):
        store = soup_stores(seed)
        cache = QueryCache()
        both = sel(store, "And(AgeOrderedObj() ReverseAgeOrderedObj())", cache)
        assert both <= sel(store, "TinyObj()", cache)


class TestOracleAgreement:
    def test_t0_examples(self, t0_store):
        for text in (
            "MutableObj()",
            "TinyObj()",
            "And(AgeOrderedObj() ReverseAgeOrderedObj())",
            "ReachableFrom(InstanceOf(A))",
            "Deeply(ImmutableObj())",
            "Not(Obj())",
        ):
            q = parse(text)
            assert set(evaluate(t0_store, q).objects) == brute_force_oracle(t0_store, q)

    @pytest.mark.parametrize("seed", range(4))
    def test_primitives_and_small_trees(self, soup_stores, seed):
        store = soup_stores(seed)
        cache = QueryCache()
        rng = random.Random(seed * 31 + 7)
        queries = [Query(name) for name in sorted(
            {"Obj", "MutableObj", "ImmutableObj", "StationaryObj", "TinyObj",
             "UniqueObj", "HeapUniqueObj", "StackBoundObj",
             "AgeOrderedObj", "ReverseAgeOrderedObj"}
        )]
        queries.append(instance_of("C0"))
        queries += [random_query(rng, 3) for _ in range(40)]
        for q in queries:
            assert set(evaluate(store, q, cache).objects) == brute_force_oracle(store, q)


class TestIntervalOverlap:
    def test_reference_handoff_is_not_aliasing(self):
        from heapscope.engine import _has_overlap

        # half-open intervals: an edge ending exactly when another starts
        # is a handoff, not aliasing
        assert not _has_overlap([(1, 5), (5, 9)])
        assert not _has_overlap([(5, 9), (1, 5)])
        assert _has_overlap([(1, 6), (5, 9)])
        assert _has_overlap([(1, 10), (4, 5)])
        assert not _has_overlap([(3, 4)])
        assert not _has_overlap([])


class TestCacheBehaviour:
    def test_cold_equals_warm(self, soup_stores):
        store = soup_stores(2)
        warm = QueryCache()
        rng = random.Random(9)
        queries = [random_query(rng, 3) for _ in range(20)]
        for q in queries:
            evaluate(store, q, warm)  # prime
        for q in queries:
            cold = evaluate(store, q, QueryCache())
            hot = evaluate(store, q, warm)
            assert cold.objects == hot.objects
            assert hot.from_cache

    def test_canonicalization_soundness(self, soup_stores):
        store = soup_stores(3)
        rng = random.Random(11)
        for _ in range(20):
            children = [random_query(rng, 2) for _ in range(3)]
            shuffled = children[:]
            rng.shuffle(shuffled)
            for op in ("And", "Or"):
                a, b = Query(op, tuple(children)), Query(op, tuple(shuffled))
                ra = evaluate(store, a, QueryCache())
                rb = evaluate(store, b, QueryCache())
                assert ra.canonical_query == rb.canonical_query
                assert ra.objects == rb.objects

    def test_subexpression_reuse(self, t0_store):
        cache = QueryCache()
        x, y = parse("MutableObj()"), parse("TinyObj()")
        evaluate(t0_store, x, cache)
        evaluate(t0_store, y, cache)
        before = cache.compute_count
        evaluate(t0_store, q_and(x, y), cache)
        assert cache.compute_count == before + 1  # only the And node computes
