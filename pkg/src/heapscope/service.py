"""JSON web API: datasets, queries, matrices, and object inspection as URLs.

Query text travels URL-encoded in the path (%20 between combinator
arguments) and appears decoded in JSON bodies. All handlers are read-only
against immutable stores; the only cross-request coordination is the result
cache's per-key compute coalescing, so requests can be served concurrently.
"""

from __future__ import annotations

import threading
from pathlib import Path
from urllib.parse import quote

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analytics
from .analytics import CompositeParseError, CompositeQuery, parse_composite
from .cache import QueryCache
from .datasets import DatasetError, list_manifests, load_dataset
from .engine import evaluate
from .errors import ApiError
from .queries import Query, QueryParseError, parse
from .store import FIELD, OBJECT_VARIABLES, DatasetStore

DEFAULT_OBJECT_LIMIT = 10_000

#: characters that stay literal in generated query URLs
_URL_SAFE = "()/<>[]$.:"


class DatasetRegistry:
    """Lazily loads dataset stores from a data directory and keeps them."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self._stores: dict[str, DatasetStore] = {}
        self._lock = threading.Lock()

    def manifests(self) -> list[dict]:
        return list_manifests(self.data_dir)

    def get(self, name: str) -> DatasetStore:
        with self._lock:
            store = self._stores.get(name)
        if store is not None:
            return store
        try:
            store = load_dataset(self.data_dir, name)
        except DatasetError:
            raise ApiError(404, "unknown-dataset", f"unknown dataset {name!r}") from None
        with self._lock:
            return self._stores.setdefault(name, store)


def parse_query_text(text: str) -> Query:
    try:
        return parse(text)
    except QueryParseError as exc:
        raise ApiError(400, "parse-error", str(exc), offset=exc.offset) from None


def parse_composite_text(text: str) -> CompositeQuery:
    try:
        return parse_composite(text)
    except CompositeParseError as exc:
        raise ApiError(400, "parse-error", str(exc), offset=exc.offset) from None


def query_url(dataset: str, query_text: str) -> str:
    return f"/json/{quote(dataset, safe='')}/query/{quote(query_text, safe=_URL_SAFE)}"


def matrix_url(dataset: str, composite_text: str) -> str:
    return f"/json/{quote(dataset, safe='')}/matrix/{quote(composite_text, safe=_URL_SAFE)}"


def summary_payload(summary: analytics.VariableSummary) -> dict:
    payload: dict = {"variable": summary.variable, "kind": summary.kind}
    if summary.kind == "categorical":
        payload["counts"] = [[value, count] for value, count in summary.counts]
    else:
        payload["bins"] = [[lo, hi, count] for lo, hi, count in summary.bins]
        payload["box"] = (
            None
            if summary.box is None
            else {
                "min": summary.box.min,
                "q1": summary.box.q1,
                "median": summary.box.median,
                "q3": summary.box.q3,
                "max": summary.box.max,
            }
        )
    return payload


def selection_payload(
    store: DatasetStore,
    cache: QueryCache,
    query_text: str,
    vis: str | None = None,
    limit: int = DEFAULT_OBJECT_LIMIT,
) -> dict:
    query = parse_query_text(query_text)
    if vis is not None and vis not in OBJECT_VARIABLES:
        raise ApiError(400, "unknown-variable", f"unknown object variable {vis!r}")
    result = evaluate(store, query, cache)
    payload = {
        "dataset": store.name,
        "query": query_text,
        "canonicalQuery": result.canonical_query,
        "count": len(result.objects),
        "objects": list(result.objects[:limit]),
        "truncated": len(result.objects) > limit,
        "fromCache": result.from_cache,
        "computeMillis": result.compute_millis,
    }
    if vis is not None:
        payload["summary"] = summary_payload(analytics.summarize(store, result, vis))
    return payload


def matrix_payload(store: DatasetStore, cache: QueryCache, composite_text: str) -> dict:
    cq = parse_composite_text(composite_text)
    stats = analytics.matrix(store, cq, cache)
    n = stats.n
    cell_urls = [
        [
            query_url(store.name, stats.parts[i])
            if i == j
            else query_url(store.name, f"And({stats.parts[i]} {stats.parts[j]})")
            for j in range(n)
        ]
        for i in range(n)
    ]
    payload = {
        "dataset": store.name,
        "composite": composite_text,
        "parts": list(stats.parts),
        "universeSize": stats.universe_size,
        "cells": [list(row) for row in stats.cells],
        "percents": [list(row) for row in stats.percents],
        "cellUrls": cell_urls,
    }
    if n >= 2:
        refinements = []
        for k in range(1, n + 1):
            entry = {"part": k}
            for op, fn in (
                ("focus", analytics.refine_focus),
                ("hide", analytics.refine_hide),
                ("split", analytics.refine_split),
            ):
                text = fn(cq, k).text()
                entry[op] = {"composite": text, "url": matrix_url(store.name, text)}
            refinements.append(entry)
        payload["refinements"] = refinements
    return payload


def object_payload(store: DatasetStore, obj: int) -> dict:
    rec = store.objects.get(obj)
    if rec is None:
        raise ApiError(404, "unknown-object", f"no object {obj} in dataset {store.name!r}")

    def edge_json(e, incoming: bool) -> dict:
        body = {
            "kind": "field" if e.kind == FIELD else "var",
            "name": e.name,
            "start": e.start,
            "end": e.end,
        }
        body["source" if incoming else "target"] = e.source if incoming else e.target
        if e.callsite_file is not None:
            body["callsite"] = f"{e.callsite_file}:{e.callsite_line}"
        return body

    return {
        "id": rec.id,
        "klass": rec.klass,
        "allocationSite": rec.allocation_site,
        "thread": rec.thread,
        "firstusage": rec.firstusage,
        "lastusage": rec.lastusage,
        "lifeTime": rec.lifetime,
        "constructionEnd": rec.construction_end,
        "outgoing": [edge_json(e, False) for e in store.edges if e.source == obj],
        "incoming": [edge_json(e, True) for e in store.edges if e.target == obj],
    }


def create_app(
    data_dir: str | Path,
    cache_dir: str | Path | None = None,
    object_limit: int = DEFAULT_OBJECT_LIMIT,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="heapscope", docs_url=None, redoc_url=None)
    registry = DatasetRegistry(data_dir)
    cache = QueryCache(cache_dir)

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.get("/datasets")
    def datasets() -> list[dict]:
        return registry.manifests()

    @app.get("/json/{dataset}/query/{query:path}")
    def run_query(dataset: str, query: str, vis: str | None = None) -> dict:
        store = registry.get(dataset)
        return selection_payload(store, cache, query, vis, object_limit)

    @app.get("/json/{dataset}/matrix/{composite:path}")
    def run_matrix(dataset: str, composite: str) -> dict:
        store = registry.get(dataset)
        return matrix_payload(store, cache, composite)

    @app.get("/json/{dataset}/objects/{obj}")
    def show_object(dataset: str, obj: int) -> dict:
        store = registry.get(dataset)
        return object_payload(store, obj)

    if ui_dir is not None and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
