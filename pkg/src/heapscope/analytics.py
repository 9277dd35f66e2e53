"""Composite queries, intersection matrices, refinement, and summaries.

A composite query is an ordered, slash-separated list of queries compared
jointly. Refinement rewrites a composite around one part: focusing keeps
only that part's objects, hiding removes them, splitting does both at once.
The generated And(...) trees always put the focused or hidden part first so
the rewritten query text (and thus its URL) is predictable; canonical
ordering only applies when results are cached.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass

from .cache import QueryCache
from .engine import SelectionResult, evaluate
from .queries import Query, QueryParseError, parse, q_and, q_not, to_text
from .store import (
    CATEGORICAL_VARIABLES,
    NUMERICAL_VARIABLES,
    DatasetStore,
    object_variable,
)

HISTOGRAM_BINS = 20


class CompositeParseError(Exception):
    """Invalid composite; carries the 1-based part index."""

    def __init__(self, message: str, part: int, offset: int | None = None):
        super().__init__(f"part {part}: {message}")
        self.part = part
        self.offset = offset


@dataclass(frozen=True)
class CompositeQuery:
    parts: tuple[Query, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("composite query needs at least one part")

    def text(self) -> str:
        return "/".join(to_text(p) for p in self.parts)


def parse_composite(text: str) -> CompositeQuery:
    """Split on "/" (slashes cannot occur inside queries) and parse each part."""
    parts = []
    for index, chunk in enumerate(text.split("/"), start=1):
        if not chunk:
            raise CompositeParseError("empty part", index)
        try:
            parts.append(parse(chunk))
        except QueryParseError as exc:
            raise CompositeParseError(str(exc), index, exc.offset) from exc
    return CompositeQuery(tuple(parts))


@dataclass(frozen=True)
class MatrixStats:
    parts: tuple[str, ...]
    universe_size: int
    cells: tuple[tuple[int, ...], ...]  # cell[i][j] = |qi ∩ qj|
    percents: tuple[tuple[int, ...], ...]  # integer percent of universe, half up

    @property
    def n(self) -> int:
        return len(self.parts)


def _percent(count: int, universe: int) -> int:
    if universe == 0:
        return 0
    return (200 * count + universe) // (2 * universe)  # round half up


def matrix(store: DatasetStore, cq: CompositeQuery, cache: QueryCache | None = None) -> MatrixStats:
    """Evaluate all parts and their pairwise intersections."""
    if cache is None:
        cache = QueryCache()
    universe = len(evaluate(store, Query("Obj"), cache).objects)
    selections = [set(evaluate(store, part, cache).objects) for part in cq.parts]
    n = len(selections)
    cells = tuple(
        tuple(len(selections[i] & selections[j]) if i != j else len(selections[i]) for j in range(n))
        for i in range(n)
    )
    percents = tuple(tuple(_percent(c, universe) for c in row) for row in cells)
    return MatrixStats(
        parts=tuple(to_text(p) for p in cq.parts),
        universe_size=universe,
        cells=cells,
        percents=percents,
    )


def _check_refinable(cq: CompositeQuery, k: int) -> None:
    if len(cq.parts) < 2:
        raise ValueError("refinement needs a composite with at least two parts")
    if not 1 <= k <= len(cq.parts):
        raise ValueError(f"part index {k} out of range 1..{len(cq.parts)}")


def refine_focus(cq: CompositeQuery, k: int) -> CompositeQuery:
    """Drop part k and constrain every other part to its selection (1-based)."""
    _check_refinable(cq, k)
    focused = cq.parts[k - 1]
    return CompositeQuery(
        tuple(q_and(focused, p) for i, p in enumerate(cq.parts, start=1) if i != k)
    )


def refine_hide(cq: CompositeQuery, k: int) -> CompositeQuery:
    """Drop part k and exclude its selection from every other part."""
    _check_refinable(cq, k)
    hidden = q_not(cq.parts[k - 1])
    return CompositeQuery(
        tuple(q_and(hidden, p) for i, p in enumerate(cq.parts, start=1) if i != k)
    )


def refine_split(cq: CompositeQuery, k: int) -> CompositeQuery:
    """Case-split every other part on membership in part k: all focused
    pairs first, then all negated pairs, each group in original order."""
    _check_refinable(cq, k)
    on = cq.parts[k - 1]
    rest = [p for i, p in enumerate(cq.parts, start=1) if i != k]
    return CompositeQuery(
        tuple(q_and(on, p) for p in rest) + tuple(q_and(q_not(on), p) for p in rest)
    )


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass(frozen=True)
class VariableSummary:
    variable: str
    kind: str  # "categorical" | "numerical"
    counts: tuple[tuple[str, int], ...] | None = None  # descending, ties lexicographic
    bins: tuple[tuple[float, float, int], ...] | None = None  # (lo, hi, count)
    box: BoxStats | None = None


def summarize(store: DatasetStore, selection: SelectionResult, variable: str) -> VariableSummary:
    """Summarize one object variable over a selection.

    Categorical variables count values; numerical ones get 20 equal-width
    histogram bins over [min, max] plus box statistics with
    linear-interpolation quartiles.
    """
    if variable in CATEGORICAL_VARIABLES:
        counter = Counter(object_variable(store, o, variable) for o in selection.objects)
        counts = tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))
        return VariableSummary(variable=variable, kind="categorical", counts=counts)
    if variable not in NUMERICAL_VARIABLES:
        raise KeyError(f"unknown object variable {variable!r}")
    values = [float(object_variable(store, o, variable)) for o in selection.objects]
    if not values:
        return VariableSummary(variable=variable, kind="numerical", bins=(), box=None)
    lo, hi = min(values), max(values)
    width = (hi - lo) / HISTOGRAM_BINS
    histogram = [0] * HISTOGRAM_BINS
    for v in values:
        idx = HISTOGRAM_BINS - 1 if width == 0 or v == hi else int((v - lo) / width)
        histogram[min(idx, HISTOGRAM_BINS - 1)] += 1
    bins = tuple(
        (lo + i * width, lo + (i + 1) * width, histogram[i]) for i in range(HISTOGRAM_BINS)
    )
    if len(values) == 1:
        q1 = median = q3 = values[0]
    else:
        q1, median, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return VariableSummary(
        variable=variable,
        kind="numerical",
        bins=bins,
        box=BoxStats(min=lo, q1=q1, median=median, q3=q3, max=hi),
    )
