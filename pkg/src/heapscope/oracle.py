"""Index-free reference evaluator used to cross-check the query engine.

Everything here is computed by direct scans over the raw store tables:
no caching, no adjacency indexes, no fixpoint acceleration. Reachability
iterates over the full edge table until nothing changes; uniqueness does
pairwise interval comparisons. Quadratic or worse on purpose -- only run
this on small stores.
"""

from __future__ import annotations

from .queries import Query
from .store import FIELD, DatasetStore


def _first_read(log) -> int | None:
    for t, kind in log:
        if kind == "R":
            return t
    return None


def _reach(store: DatasetStore, seeds: set[int], heap_only: bool) -> set[int]:
    current = set(seeds)
    while True:
        added = False
        for e in store.edges:
            if heap_only and e.kind != FIELD:
                continue
            if e.source != 0 and e.source in current and e.target not in current:
                current.add(e.target)
                added = True
        if not added:
            return current


def _co_reach(store: DatasetStore, seeds: set[int], heap_only: bool) -> set[int]:
    current = set(seeds)
    while True:
        added = False
        for e in store.edges:
            if heap_only and e.kind != FIELD:
                continue
            if e.source != 0 and e.target in current and e.source not in current:
                current.add(e.source)
                added = True
        if not added:
            return current


def _overlapping_pair(intervals: list[tuple[int, int]]) -> bool:
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            a, b = intervals[i], intervals[j]
            if a[0] < b[1] and b[0] < a[1]:
                return True
    return False


def brute_force_oracle(store: DatasetStore, q: Query) -> frozenset[int]:
    universe = set(store.objects)
    name = q.name

    if name == "Obj":
        return frozenset(universe)
    if name in ("MutableObj", "ImmutableObj"):
        mutated = set()
        for o in universe:
            end = store.objects[o].construction_end
            for (obj, _f), log in store.field_access.items():
                if obj == o and any(k == "W" and t > end for t, k in log):
                    mutated.add(o)
                    break
        return frozenset(mutated if name == "MutableObj" else universe - mutated)
    if name == "InstanceOf":
        return frozenset(o for o in universe if store.objects[o].klass == q.klass)
    if name == "StationaryObj":
        out = set()
        for o in universe:
            ok = True
            for (obj, _f), log in store.field_access.items():
                if obj != o:
                    continue
                r0 = _first_read(log)
                if r0 is not None and any(k == "W" and t > r0 for t, k in log):
                    ok = False
                    break
            if ok:
                out.add(o)
        return frozenset(out)
    if name == "TinyObj":
        return frozenset(
            o for o in universe
            if not any(e.source == o and e.kind == FIELD for e in store.edges)
        )
    if name in ("UniqueObj", "HeapUniqueObj"):
        heap_only = name == "HeapUniqueObj"
        out = set()
        for o in universe:
            intervals = [
                (e.start, e.end)
                for e in store.edges
                if e.target == o and (not heap_only or e.kind == FIELD)
            ]
            if not _overlapping_pair(intervals):
                out.add(o)
        return frozenset(out)
    if name == "StackBoundObj":
        return frozenset(
            o for o in universe
            if not any(e.target == o and e.kind == FIELD for e in store.edges)
        )
    if name in ("AgeOrderedObj", "ReverseAgeOrderedObj"):
        out = set()
        for o in universe:
            mine = store.objects[o].firstusage
            targets = {e.target for e in store.edges if e.source == o and e.kind == FIELD}
            if name == "AgeOrderedObj":
                ok = all(mine > store.objects[t].firstusage for t in targets)
            else:
                ok = all(mine < store.objects[t].firstusage for t in targets)
            if ok:
                out.add(o)
        return frozenset(out)

    if name == "Not":
        return frozenset(universe - brute_force_oracle(store, q.args[0]))
    if name == "And":
        result = set(brute_force_oracle(store, q.args[0]))
        for sub in q.args[1:]:
            result &= brute_force_oracle(store, sub)
        return frozenset(result)
    if name == "Or":
        result = set(brute_force_oracle(store, q.args[0]))
        for sub in q.args[1:]:
            result |= brute_force_oracle(store, sub)
        return frozenset(result)

    sub = set(brute_force_oracle(store, q.args[0]))
    if name in ("RefersTo", "HeapRefersTo"):
        heap_only = name == "HeapRefersTo"
        return frozenset(
            e.source
            for e in store.edges
            if e.source != 0 and e.target in sub and (not heap_only or e.kind == FIELD)
        )
    if name in ("ReferredFrom", "HeapReferredFrom"):
        heap_only = name == "HeapReferredFrom"
        return frozenset(
            e.target
            for e in store.edges
            if e.source in sub and (not heap_only or e.kind == FIELD)
        )
    if name in ("ReachableFrom", "HeapReachableFrom"):
        return frozenset(_reach(store, sub, name == "HeapReachableFrom"))
    if name in ("CanReach", "CanHeapReach"):
        return frozenset(_co_reach(store, sub, name == "CanHeapReach"))
    if name in ("Deeply", "HeapDeeply"):
        heap_only = name == "HeapDeeply"
        return frozenset(o for o in sub if _reach(store, {o}, heap_only) <= sub)
    raise ValueError(f"unhandled query node {name!r}")
