"""On-disk dataset directories.

Each ingested dataset lives in its own directory under the data dir:

    <data-dir>/<name>/
        manifest.json   name and table counts, ingestion timestamp
        trace.trc       the original trace file, byte for byte
        tables.bin      serialized store tables

tables.bin uses the same binary conventions as the trace format
(little-endian, u16-length UTF-8 text, u64 integers). Datasets never change
after ingestion; loading only reads.
"""

from __future__ import annotations

import datetime as _dt
import io
import json
import struct
from pathlib import Path
from urllib.parse import quote

from .store import CallRecord, DatasetStore, ObjectRecord, RefEdge, FIELD, VAR

TABLES_MAGIC = b"SPNTABLE"
TABLES_VERSION = 1

MANIFEST_FILE = "manifest.json"
TRACE_FILE = "trace.trc"
TABLES_FILE = "tables.bin"

_KIND_TAG = {FIELD: 1, VAR: 2}
_TAG_KIND = {1: FIELD, 2: VAR}


class DatasetError(Exception):
    pass


class _Writer:
    def __init__(self):
        self.buf = io.BytesIO()

    def u64(self, v: int):
        self.buf.write(struct.pack("<Q", v))

    def u8(self, v: int):
        self.buf.write(struct.pack("<B", v))

    def text(self, s: str):
        raw = s.encode("utf-8")
        self.buf.write(struct.pack("<H", len(raw)))
        self.buf.write(raw)

    def opt_u64(self, v: int | None):
        if v is None:
            self.u8(0)
        else:
            self.u8(1)
            self.u64(v)


class _TableReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DatasetError("corrupt tables file: truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def u8(self) -> int:
        return self.take(1)[0]

    def text(self) -> str:
        n = struct.unpack("<H", self.take(2))[0]
        return self.take(n).decode("utf-8")

    def opt_u64(self) -> int | None:
        return self.u64() if self.u8() else None


def serialize_tables(store: DatasetStore) -> bytes:
    w = _Writer()
    w.buf.write(TABLES_MAGIC)
    w.buf.write(struct.pack("<I", TABLES_VERSION))
    w.u64(store.event_count)
    w.u64(store.last_time)

    w.u64(len(store.objects))
    for rec in store.objects.values():
        w.u64(rec.id)
        w.text(rec.klass)
        if rec.alloc_file is None:
            w.u8(0)
        else:
            w.u8(1)
            w.text(rec.alloc_file)
            w.u64(rec.alloc_line or 0)
        w.text(rec.thread)
        w.u64(rec.firstusage)
        w.u64(rec.lastusage)
        w.u64(rec.construction_end)

    w.u64(len(store.edges))
    for e in store.edges:
        w.u64(e.source)
        w.u64(e.target)
        w.u8(_KIND_TAG[e.kind])
        w.text(e.name)
        w.u64(e.start)
        w.u64(e.end)
        if e.callsite_file is None:
            w.u8(0)
        else:
            w.u8(1)
            w.text(e.callsite_file)
            w.u64(e.callsite_line or 0)

    w.u64(len(store.calls))
    for c in store.calls:
        w.u64(c.callee)
        w.text(c.klass)
        w.text(c.method)
        w.u64(c.enter)
        w.opt_u64(c.exit)

    w.u64(len(store.field_access))
    for (obj, fieldname), log in store.field_access.items():
        w.u64(obj)
        w.text(fieldname)
        w.u64(len(log))
        for t, kind in log:
            w.u64(t)
            w.u8(1 if kind == "R" else 2)
    return w.buf.getvalue()


def deserialize_tables(data: bytes, name: str) -> DatasetStore:
    r = _TableReader(data)
    if r.take(len(TABLES_MAGIC)) != TABLES_MAGIC:
        raise DatasetError("corrupt tables file: bad magic")
    version = struct.unpack("<I", r.take(4))[0]
    if version != TABLES_VERSION:
        raise DatasetError(f"unsupported tables version {version}")
    event_count = r.u64()
    last_time = r.u64()

    objects: dict[int, ObjectRecord] = {}
    for _ in range(r.u64()):
        oid = r.u64()
        klass = r.text()
        if r.u8():
            alloc_file, alloc_line = r.text(), r.u64()
        else:
            alloc_file, alloc_line = None, None
        objects[oid] = ObjectRecord(
            id=oid,
            klass=klass,
            alloc_file=alloc_file,
            alloc_line=alloc_line,
            thread=r.text(),
            firstusage=r.u64(),
            lastusage=r.u64(),
            construction_end=r.u64(),
        )

    edges = []
    for _ in range(r.u64()):
        source, target = r.u64(), r.u64()
        kind = _TAG_KIND[r.u8()]
        edge_name = r.text()
        start, end = r.u64(), r.u64()
        if r.u8():
            cs_file, cs_line = r.text(), r.u64()
        else:
            cs_file, cs_line = None, None
        edges.append(RefEdge(source, target, kind, edge_name, start, end, cs_file, cs_line))

    calls = []
    for _ in range(r.u64()):
        calls.append(CallRecord(r.u64(), r.text(), r.text(), r.u64(), r.opt_u64()))

    field_access = {}
    for _ in range(r.u64()):
        obj = r.u64()
        fieldname = r.text()
        log = tuple((r.u64(), "R" if r.u8() == 1 else "W") for _ in range(r.u64()))
        field_access[(obj, fieldname)] = log

    return DatasetStore(
        name=name,
        objects=objects,
        edges=tuple(edges),
        calls=tuple(calls),
        field_access=field_access,
        event_count=event_count,
        last_time=last_time,
    )


def dataset_dir(data_dir: str | Path, name: str) -> Path:
    return Path(data_dir) / quote(name, safe="")


def save_dataset(store: DatasetStore, trace_bytes: bytes, data_dir: str | Path) -> Path:
    target = dataset_dir(data_dir, store.name)
    if target.exists():
        raise DatasetError(f"dataset {store.name!r} already exists")
    target.mkdir(parents=True)
    (target / TRACE_FILE).write_bytes(trace_bytes)
    (target / TABLES_FILE).write_bytes(serialize_tables(store))
    manifest = {
        "name": store.name,
        "objectCount": len(store.objects),
        "eventCount": store.event_count,
        "classCount": store.class_count,
        "ingestedAt": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    with open(target / MANIFEST_FILE, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return target


def load_manifest(data_dir: str | Path, name: str) -> dict:
    path = dataset_dir(data_dir, name) / MANIFEST_FILE
    if not path.exists():
        raise DatasetError(f"unknown dataset {name!r}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_dataset(data_dir: str | Path, name: str) -> DatasetStore:
    target = dataset_dir(data_dir, name)
    tables = target / TABLES_FILE
    if not tables.exists():
        raise DatasetError(f"unknown dataset {name!r}")
    return deserialize_tables(tables.read_bytes(), name)


def list_manifests(data_dir: str | Path) -> list[dict]:
    root = Path(data_dir)
    if not root.exists():
        return []
    out = []
    for child in root.iterdir():
        if (child / MANIFEST_FILE).exists():
            with open(child / MANIFEST_FILE, "r", encoding="utf-8") as fh:
                out.append(json.load(fh))
    out.sort(key=lambda m: m["name"])
    return out
