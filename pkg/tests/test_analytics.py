import random

import pytest

from heapscope.analytics import (
    CompositeParseError,
    CompositeQuery,
    matrix,
    parse_composite,
    refine_focus,
    refine_hide,
    refine_split,
    summarize,
)
from heapscope.cache import QueryCache
from heapscope.engine import evaluate
from heapscope.queries import parse, q_not, to_text
from helpers import random_query


def composite(*texts):
    return CompositeQuery(tuple(parse(t) for t in texts))


class TestParseComposite:
    def test_three_parts(self):
        cq = parse_composite("ImmutableObj()/HeapUniqueObj()/TinyObj()")
        assert [to_text(p) for p in cq.parts] == [
            "ImmutableObj()", "HeapUniqueObj()", "TinyObj()",
        ]

    def test_single_part(self):
        assert len(parse_composite("Obj()").parts) == 1

    def test_empty_part_reports_index(self):
        with pytest.raises(CompositeParseError) as exc:
            parse_composite("Obj()//TinyObj()")
        assert exc.value.part == 2

    def test_part_parse_error_reports_index(self):
        with pytest.raises(CompositeParseError) as exc:
            parse_composite("Obj()/Nope()")
        assert exc.value.part == 2


class TestMatrix:
    def test_t0_mutable_tiny(self, t0_store):
        stats = matrix(t0_store, composite("MutableObj()", "TinyObj()"))
        assert stats.cells == ((1, 0), (0, 1))
        assert stats.percents == ((50, 0), (0, 50))
        assert stats.universe_size == 2

    def test_obj_obj_is_all_hundred(self, soup_stores):
        store = soup_stores(0)
        stats = matrix(store, composite("Obj()", "Obj()"))
        n = len(store.objects)
        assert all(c == n for row in stats.cells for c in row)
        assert all(p == 100 for row in stats.percents for p in row)

    def test_string_scenario_shared_arrays_all_stationary(self, string_store):
        stats = matrix(
            string_store,
            composite("HeapReferredFrom(InstanceOf(Str))", "StationaryObj()"),
        )
        # every array behind a string is stationary, so the intersection
        # percent equals the first diagonal percent
        assert stats.percents[0][1] == stats.percents[0][0]
        assert stats.cells[0][1] == stats.cells[0][0]

    @pytest.mark.parametrize("seed", range(4))
    def test_symmetry_and_cap(self, soup_stores, seed):
        store = soup_stores(seed)
        rng = random.Random(seed + 100)
        cq = CompositeQuery(tuple(random_query(rng, 2) for _ in range(3)))
        stats = matrix(store, cq)
        for i in range(3):
            for j in range(3):
                assert stats.cells[i][j] == stats.cells[j][i]
                assert stats.cells[i][j] <= min(stats.cells[i][i], stats.cells[j][j])
                assert 0 <= stats.percents[i][j] <= 100

    def test_empty_store_has_zero_percents(self):
        from heapscope.store import ingest

        stats = matrix(ingest([], "empty"), composite("Obj()", "TinyObj()"))
        assert stats.universe_size == 0
        assert all(p == 0 for row in stats.percents for p in row)


class TestRefinement:
    def test_focus_follows_rewrite_table(self):
        cq = composite("InstanceOf(java.lang.String)", "HeapUniqueObj()")
        assert refine_focus(cq, 2).text() == (
            "And(HeapUniqueObj() InstanceOf(java.lang.String))"
        )

    def test_focus_three_parts(self):
        cq = composite("TinyObj()", "MutableObj()", "UniqueObj()")
        assert refine_focus(cq, 3).text() == (
            "And(UniqueObj() TinyObj())/And(UniqueObj() MutableObj())"
        )

    def test_hide_follows_rewrite_table(self):
        cq = composite("InstanceOf(java.lang.String)", "HeapUniqueObj()")
        assert refine_hide(cq, 2).text() == (
            "And(Not(HeapUniqueObj()) InstanceOf(java.lang.String))"
        )

    def test_hide_part_one(self):
        cq = composite("TinyObj()", "MutableObj()")
        assert refine_hide(cq, 1).text() == "And(Not(TinyObj()) MutableObj())"

    def test_split_groups_focused_then_negated(self):
        cq = composite("TinyObj()", "MutableObj()", "StationaryObj()")
        assert refine_split(cq, 3).text() == (
            "And(StationaryObj() TinyObj())"
            "/And(StationaryObj() MutableObj())"
            "/And(Not(StationaryObj()) TinyObj())"
            "/And(Not(StationaryObj()) MutableObj())"
        )

    def test_split_age_order_example(self):
        cq = composite(
            "AgeOrderedObj()", "ReverseAgeOrderedObj()", "InstanceOf(java.lang.String)"
        )
        assert refine_split(cq, 3).text() == (
            "And(InstanceOf(java.lang.String) AgeOrderedObj())"
            "/And(InstanceOf(java.lang.String) ReverseAgeOrderedObj())"
            "/And(Not(InstanceOf(java.lang.String)) AgeOrderedObj())"
            "/And(Not(InstanceOf(java.lang.String)) ReverseAgeOrderedObj())"
        )

    @pytest.mark.parametrize("fn", [refine_focus, refine_hide, refine_split])
    def test_refinement_needs_two_parts(self, fn):
        with pytest.raises(ValueError):
            fn(composite("Obj()"), 1)
        with pytest.raises(ValueError):
            fn(composite("Obj()", "TinyObj()"), 3)

    def test_hide_equals_focus_of_negation(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randrange(2, 6)
            parts = tuple(random_query(rng, 2) for _ in range(n))
            k = rng.randrange(1, n + 1)
            cq = CompositeQuery(parts)
            negated = CompositeQuery(
                tuple(q_not(p) if i == k - 1 else p for i, p in enumerate(parts))
            )
            assert refine_hide(cq, k).text() == refine_focus(negated, k).text()

    @pytest.mark.parametrize("seed", range(3))
    def test_split_decomposes_each_part(self, soup_stores, seed):
        store = soup_stores(seed)
        cache = QueryCache()
        rng = random.Random(seed + 77)
        parts = tuple(random_query(rng, 2) for _ in range(3))
        cq = CompositeQuery(parts)
        split = refine_split(cq, 1)
        rest = parts[1:]
        for i, part in enumerate(rest):
            focused = set(evaluate(store, split.parts[i], cache).objects)
            negated = set(evaluate(store, split.parts[i + len(rest)], cache).objects)
            whole = set(evaluate(store, part, cache).objects)
            assert focused | negated == whole
            assert not focused & negated


class TestSummarize:
    def test_t0_klass_counts(self, t0_store):
        selection = evaluate(t0_store, parse("Obj()"))
        summary = summarize(t0_store, selection, "klass")
        assert summary.kind == "categorical"
        assert summary.counts == (("A", 1), ("B", 1))

    def test_counts_descending_with_lexicographic_ties(self, soup_stores):
        store = soup_stores(0)
        summary = summarize(store, evaluate(store, parse("Obj()")), "klass")
        pairs = list(summary.counts)
        assert pairs == sorted(pairs, key=lambda kv: (-kv[1], kv[0]))
        assert sum(c for _, c in pairs) == len(store.objects)

    def test_empty_selection(self, t0_store):
        selection = evaluate(t0_store, parse("Not(Obj())"))
        assert summarize(t0_store, selection, "klass").counts == ()
        numeric = summarize(t0_store, selection, "lifeTime")
        assert numeric.bins == () and numeric.box is None

    def test_single_object_numeric_degenerates(self, t0_store):
        selection = evaluate(t0_store, parse("MutableObj()"))
        summary = summarize(t0_store, selection, "log10lifeTime")
        assert summary.box.min == summary.box.max == summary.box.median
        occupied = [b for b in summary.bins if b[2] > 0]
        assert len(occupied) == 1 and occupied[0][2] == 1

    def test_histogram_conserves_mass_and_box_is_ordered(self, soup_stores):
        store = soup_stores(1)
        selection = evaluate(store, parse("Obj()"))
        summary = summarize(store, selection, "log10lifeTime")
        assert sum(b[2] for b in summary.bins) == len(selection.objects)
        box = summary.box
        assert box.min <= box.q1 <= box.median <= box.q3 <= box.max

    def test_unknown_variable(self, t0_store):
        with pytest.raises(KeyError):
            summarize(t0_store, evaluate(t0_store, parse("Obj()")), "color")
