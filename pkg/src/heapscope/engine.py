"""Query evaluation over a DatasetStore, memoized per canonical subtree.

All graph queries run over the union of every reference edge that ever
existed in the trace ("ever" semantics); per-instant reachability is out of
scope. Aliasing checks use the half-open validity intervals instead, so a
reference handoff at one timestamp does not count as aliasing.

Every subtree consults the shared cache bottom-up: a hit stops the
recursion, a miss computes from (possibly cached) children and inserts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .cache import QueryCache
from .queries import Query, canonicalize
from .store import READ, WRITE, DatasetStore


@dataclass(frozen=True)
class SelectionResult:
    dataset: str
    canonical_query: str
    objects: tuple[int, ...]  # ascending, duplicate-free
    from_cache: bool
    compute_millis: int


def _mutable(store: DatasetStore) -> frozenset[int]:
    out = set()
    for (obj, _field), log in store.field_access.items():
        if obj == 0 or obj in out:
            continue
        end = store.objects[obj].construction_end
        if any(kind == WRITE and t > end for t, kind in log):
            out.add(obj)
    return frozenset(out)


def _non_stationary(store: DatasetStore) -> frozenset[int]:
    bad = set()
    for (obj, _field), log in store.field_access.items():
        if obj == 0 or obj in bad:
            continue
        first_read = next((t for t, kind in log if kind == READ), None)
        if first_read is not None and any(
            kind == WRITE and t > first_read for t, kind in log
        ):
            bad.add(obj)
    return frozenset(bad)


def _has_overlap(intervals: list[tuple[int, int]]) -> bool:
    max_end = None
    for start, end in sorted(intervals):
        if max_end is not None and start < max_end:
            return True
        if max_end is None or end > max_end:
            max_end = end
    return False


def _closure(adjacency: dict[int, frozenset[int]], seeds: frozenset[int]) -> frozenset[int]:
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        node = stack.pop()
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


def _neighbours(adjacency: dict[int, frozenset[int]], seeds: frozenset[int]) -> frozenset[int]:
    out: set[int] = set()
    for node in seeds:
        out |= adjacency.get(node, frozenset())
    return frozenset(out)


def _apply(store: DatasetStore, q: Query, kids: list[frozenset[int]]) -> frozenset[int]:
    """Compute one node given its children's selections."""
    universe = store.universe
    name = q.name
    if name == "Obj":
        return universe
    if name == "MutableObj":
        return _mutable(store)
    if name == "ImmutableObj":
        return universe - _mutable(store)
    if name == "InstanceOf":
        return frozenset(o for o, rec in store.objects.items() if rec.klass == q.klass)
    if name == "StationaryObj":
        return universe - _non_stationary(store)
    if name == "TinyObj":
        return universe - frozenset(store.out_field)
    if name == "UniqueObj":
        return universe - frozenset(
            o for o, ivs in store.target_intervals_any.items() if _has_overlap(ivs)
        )
    if name == "HeapUniqueObj":
        return universe - frozenset(
            o for o, ivs in store.target_intervals_field.items() if _has_overlap(ivs)
        )
    if name == "StackBoundObj":
        return universe - frozenset(store.target_intervals_field)
    if name in ("AgeOrderedObj", "ReverseAgeOrderedObj"):
        younger = name == "AgeOrderedObj"
        first = {o: rec.firstusage for o, rec in store.objects.items()}
        out = set()
        for o in universe:
            targets = store.out_field.get(o)
            if not targets:
                out.add(o)  # no field references: qualifies vacuously
            elif younger and all(first[o] > first[t] for t in targets):
                out.add(o)
            elif not younger and all(first[o] < first[t] for t in targets):
                out.add(o)
        return frozenset(out)
    kid = kids[0] if kids else frozenset()
    if name == "RefersTo":
        return _neighbours(store.in_any, kid)
    if name == "HeapRefersTo":
        return _neighbours(store.in_field, kid)
    if name == "ReferredFrom":
        return _neighbours(store.out_any, kid)
    if name == "HeapReferredFrom":
        return _neighbours(store.out_field, kid)
    if name == "ReachableFrom":
        return _closure(store.out_any, kid)
    if name == "HeapReachableFrom":
        return _closure(store.out_field, kid)
    if name == "CanReach":
        return _closure(store.in_any, kid)
    if name == "CanHeapReach":
        return _closure(store.in_field, kid)
    if name == "Deeply":
        # member of kid that can reach outside kid == member of the reverse
        # closure of the complement
        return kid - _closure(store.in_any, universe - kid)
    if name == "HeapDeeply":
        return kid - _closure(store.in_field, universe - kid)
    if name == "Not":
        return universe - kid
    if name == "And":
        out = kids[0]
        for k in kids[1:]:
            out &= k
        return out
    if name == "Or":
        out = kids[0]
        for k in kids[1:]:
            out |= k
        return out
    raise ValueError(f"unhandled query node {name!r}")


def _evaluate_set(store: DatasetStore, q: Query, cache: QueryCache) -> tuple[frozenset[int], bool]:
    key = canonicalize(q)

    def compute() -> frozenset[int]:
        kids = [_evaluate_set(store, child, cache)[0] for child in q.args]
        return _apply(store, q, kids)

    return cache.get_or_compute(store.name, key, compute)


def evaluate(store: DatasetStore, q: Query, cache: QueryCache | None = None) -> SelectionResult:
    """Evaluate a query, reusing cached subtree results where possible."""
    if cache is None:
        cache = QueryCache()
    started = time.perf_counter()
    objects, from_cache = _evaluate_set(store, q, cache)
    millis = int((time.perf_counter() - started) * 1000)
    return SelectionResult(
        dataset=store.name,
        canonical_query=canonicalize(q),
        objects=tuple(sorted(objects)),
        from_cache=from_cache,
        compute_millis=millis,
    )
