"""Bit-exact binary codec for trace files.

Layout (little-endian throughout):

    header:  magic "SPNTRACE" | u32 version (=1) | u64 event count
    record:  u64 time | u8 kind tag | payload

Kind tags are 1..7 in the order Alloc, MethodEnter, MethodExit, FieldStore,
FieldLoad, VarStore, VarLoad. Payload fields follow the declaration order of
the event dataclasses: text is u16 length + UTF-8 bytes, object ids and line
numbers are u64, variable slots are u8. Decoding is streaming: events are
yielded one at a time and memory use does not depend on file size.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Iterable, Iterator, Sequence

from .events import (
    Alloc,
    FieldLoad,
    FieldStore,
    MethodEnter,
    MethodExit,
    TraceEvent,
    VarLoad,
    VarStore,
)

MAGIC = b"SPNTRACE"
VERSION = 1

_HEADER = struct.Struct("<8sIQ")
_U64 = struct.Struct("<Q")
_U16 = struct.Struct("<H")
_REC_HEAD = struct.Struct("<QB")

_KIND_TAGS = {
    Alloc: 1,
    MethodEnter: 2,
    MethodExit: 3,
    FieldStore: 4,
    FieldLoad: 5,
    VarStore: 6,
    VarLoad: 7,
}
_TAG_KINDS = {tag: cls for cls, tag in _KIND_TAGS.items()}


class TraceFormatError(Exception):
    """Base for trace encode/decode failures; carries a byte offset when known."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at byte {offset})")
        self.offset = offset


class BadMagicError(TraceFormatError):
    pass


class VersionMismatchError(TraceFormatError):
    pass


class TruncatedRecordError(TraceFormatError):
    pass


class UnknownEventKindError(TraceFormatError):
    pass


class NonMonotonicTimeError(TraceFormatError):
    """Event times must be strictly increasing; names the offending event index."""

    def __init__(self, index: int, time: int, previous: int, offset: int | None = None):
        super().__init__(
            f"event {index} has time {time}, not greater than previous time {previous}",
            offset,
        )
        self.index = index


def _pack_text(out: list[bytes], text: str) -> None:
    raw = text.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise TraceFormatError(f"text field longer than 65535 bytes: {len(raw)}")
    out.append(_U16.pack(len(raw)))
    out.append(raw)


def _encode_record(event: TraceEvent) -> bytes:
    tag = _KIND_TAGS[type(event)]
    out: list[bytes] = [_REC_HEAD.pack(event.time, tag)]
    _pack_text(out, event.thread)
    if isinstance(event, Alloc):
        out.append(_U64.pack(event.obj))
        _pack_text(out, event.klass)
        _pack_text(out, event.alloc_file)
        out.append(_U64.pack(event.alloc_line))
    elif isinstance(event, (MethodEnter, MethodExit)):
        out.append(_U64.pack(event.callee))
        _pack_text(out, event.klass)
        _pack_text(out, event.method)
    elif isinstance(event, FieldStore):
        out.append(_U64.pack(event.caller))
        _pack_text(out, event.field)
        out.append(_U64.pack(event.oldval))
        out.append(_U64.pack(event.newval))
        _pack_text(out, event.callsite_file)
        out.append(_U64.pack(event.callsite_line))
    elif isinstance(event, FieldLoad):
        out.append(_U64.pack(event.caller))
        _pack_text(out, event.field)
        out.append(_U64.pack(event.value))
    elif isinstance(event, VarStore):
        _pack_text(out, event.caller_method)
        _pack_text(out, event.caller_class)
        out.append(_U64.pack(event.caller_tag))
        out.append(struct.pack("<B", event.var))
        out.append(_U64.pack(event.oldval))
        out.append(_U64.pack(event.newval))
    elif isinstance(event, VarLoad):
        _pack_text(out, event.caller_method)
        _pack_text(out, event.caller_class)
        out.append(_U64.pack(event.caller_tag))
        out.append(struct.pack("<B", event.var))
        out.append(_U64.pack(event.value))
    else:
        raise TraceFormatError(f"cannot encode {type(event).__name__}")
    return b"".join(out)


class TraceWriter:
    """Streaming encoder; the sink must be seekable so the header count can be
    patched on close. Use encode_trace() for in-memory sequences."""

    def __init__(self, sink: BinaryIO):
        self._sink = sink
        self._count = 0
        self._last_time = 0
        self.bytes_written = sink.write(_HEADER.pack(MAGIC, VERSION, 0))

    def write(self, event: TraceEvent) -> None:
        if event.time <= self._last_time:
            raise NonMonotonicTimeError(self._count, event.time, self._last_time)
        self._last_time = event.time
        self.bytes_written += self._sink.write(_encode_record(event))
        self._count += 1

    def close(self) -> int:
        """Patch the event count into the header; returns total bytes written."""
        pos = self._sink.tell()
        self._sink.seek(len(MAGIC) + 4)
        self._sink.write(_U64.pack(self._count))
        self._sink.seek(pos)
        return self.bytes_written


def encode_trace(events: Sequence[TraceEvent], sink: BinaryIO) -> int:
    """Write a complete trace file for `events`; returns bytes written.

    Times are validated strictly increasing; a violation raises
    NonMonotonicTimeError naming the offending event index.
    """
    written = sink.write(_HEADER.pack(MAGIC, VERSION, len(events)))
    last_time = 0
    for index, event in enumerate(events):
        if event.time <= last_time:
            raise NonMonotonicTimeError(index, event.time, last_time)
        last_time = event.time
        written += sink.write(_encode_record(event))
    return written


def encode_trace_bytes(events: Sequence[TraceEvent]) -> bytes:
    import io

    buf = io.BytesIO()
    encode_trace(events, buf)
    return buf.getvalue()


class _Reader:
    def __init__(self, source: BinaryIO):
        self._source = source
        self.offset = 0
        self.record_start = 0

    def exact(self, n: int) -> bytes:
        data = self._source.read(n)
        if len(data) != n:
            raise TruncatedRecordError("trace file truncated", self.record_start)
        self.offset += n
        return data

    def u64(self) -> int:
        return _U64.unpack(self.exact(8))[0]

    def u8(self) -> int:
        return self.exact(1)[0]

    def text(self) -> str:
        n = _U16.unpack(self.exact(2))[0]
        return self.exact(n).decode("utf-8")


def decode_trace(source: BinaryIO) -> Iterator[TraceEvent]:
    """Stream events from a trace file, validating header and time order.

    Raises BadMagicError, VersionMismatchError, UnknownEventKindError,
    TruncatedRecordError, or NonMonotonicTimeError; each carries the byte
    offset of the failure (for truncation, the end of the last complete
    record).
    """
    rd = _Reader(source)
    magic = rd.exact(len(MAGIC))
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}", 0)
    version = struct.unpack("<I", rd.exact(4))[0]
    if version != VERSION:
        raise VersionMismatchError(f"unsupported version {version}", len(MAGIC))
    count = rd.u64()
    last_time = 0
    for index in range(count):
        rd.record_start = rd.offset
        time = rd.u64()
        tag_offset = rd.offset
        tag = rd.u8()
        cls = _TAG_KINDS.get(tag)
        if cls is None:
            raise UnknownEventKindError(f"unknown event kind tag {tag}", tag_offset)
        thread = rd.text()
        if cls is Alloc:
            event: TraceEvent = Alloc(time, thread, rd.u64(), rd.text(), rd.text(), rd.u64())
        elif cls is MethodEnter or cls is MethodExit:
            event = cls(time, thread, rd.u64(), rd.text(), rd.text())
        elif cls is FieldStore:
            event = FieldStore(
                time, thread, rd.u64(), rd.text(), rd.u64(), rd.u64(), rd.text(), rd.u64()
            )
        elif cls is FieldLoad:
            event = FieldLoad(time, thread, rd.u64(), rd.text(), rd.u64())
        elif cls is VarStore:
            event = VarStore(
                time, thread, rd.text(), rd.text(), rd.u64(), rd.u8(), rd.u64(), rd.u64()
            )
        else:
            event = VarLoad(time, thread, rd.text(), rd.text(), rd.u64(), rd.u8(), rd.u64())
        if time <= last_time:
            raise NonMonotonicTimeError(index, time, last_time, rd.record_start)
        last_time = time
        yield event


def decode_trace_bytes(data: bytes) -> list[TraceEvent]:
    import io

    return list(decode_trace(io.BytesIO(data)))
