"""Persistent query-result cache with per-key compute coalescing.

Keys are (dataset name, canonical query text). Entries are written to disk
as one JSON file per key under <cache_dir>/<dataset>/, via a temp file and
atomic rename so a failed write never corrupts existing entries. Concurrent
misses on the same key block on a per-key lock and compute exactly once.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Callable
from urllib.parse import quote


class QueryCache:
    def __init__(self, cache_dir: str | Path | None = None):
        self._dir = Path(cache_dir) if cache_dir is not None else None
        self._mem: dict[tuple[str, str], frozenset[int]] = {}
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._master = threading.Lock()
        self.compute_count = 0  # number of actual compute() invocations

    def _path(self, dataset: str, key: str) -> Path:
        assert self._dir is not None
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self._dir / quote(dataset, safe="") / f"{digest}.json"

    def _load(self, dataset: str, key: str) -> frozenset[int] | None:
        if self._dir is None:
            return None
        path = self._path(dataset, key)
        if not path.exists():
            return None
        with open(path, "r", encoding="utf-8") as fh:
            entry = json.load(fh)
        if entry.get("key") != key:  # hash collision or foreign file
            return None
        return frozenset(entry["objects"])

    def _save(self, dataset: str, key: str, objects: frozenset[int]) -> None:
        if self._dir is None:
            return
        path = self._path(dataset, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"dataset": dataset, "key": key, "objects": sorted(objects)}, fh)
        os.replace(tmp, path)

    def lookup(self, dataset: str, key: str) -> frozenset[int] | None:
        """Peek without computing; promotes disk hits into memory."""
        full = (dataset, key)
        with self._master:
            if full in self._mem:
                return self._mem[full]
        loaded = self._load(dataset, key)
        if loaded is not None:
            with self._master:
                self._mem.setdefault(full, loaded)
        return loaded

    def get_or_compute(
        self, dataset: str, key: str, compute: Callable[[], frozenset[int]]
    ) -> tuple[frozenset[int], bool]:
        """Return (objects, from_cache); compute runs at most once per key."""
        cached = self.lookup(dataset, key)
        if cached is not None:
            return cached, True
        full = (dataset, key)
        with self._master:
            lock = self._locks.setdefault(full, threading.Lock())
        with lock:
            cached = self.lookup(dataset, key)
            if cached is not None:
                return cached, True
            value = frozenset(compute())
            self.compute_count += 1
            self._save(dataset, key, value)
            with self._master:
                self._mem[full] = value
        return value, False
