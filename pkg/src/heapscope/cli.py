"""Command line entry point: gen | ingest | query | matrix | serve."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

from .analytics import CompositeParseError
from .cache import QueryCache
from .codec import TraceFormatError, decode_trace, encode_trace
from .datasets import DatasetError, load_dataset, save_dataset
from .errors import ApiError
from .queries import QueryParseError
from .scenarios import SCENARIO_NAMES, builtin_scenario
from .store import IngestError, ingest
from .toyprogram import ProgramError

_ERRORS = (
    ApiError,
    TraceFormatError,
    ProgramError,
    IngestError,
    QueryParseError,
    CompositeParseError,
    DatasetError,
    ValueError,
    OSError,
)


def _data_dir(args) -> Path:
    if args.data_dir:
        return Path(args.data_dir)
    env = os.environ.get("HEAPSCOPE_DATA_DIR")
    if env:
        return Path(env)
    raise DatasetError("no data directory: pass --data-dir or set HEAPSCOPE_DATA_DIR")


def _add_data_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--data-dir",
        default=None,
        help="dataset directory (default: $HEAPSCOPE_DATA_DIR)",
    )


def cmd_gen(args) -> int:
    events = builtin_scenario(args.scenario, args.seed, args.objects, args.events)
    with open(args.output, "wb") as fh:
        written = encode_trace(events, fh)
    print(f"{args.output}: {len(events)} events, {written} bytes")
    return 0


def cmd_ingest(args) -> int:
    data = Path(args.tracefile).read_bytes()
    events = list(decode_trace(io.BytesIO(data)))
    store = ingest(events, args.name)
    target = save_dataset(store, data, _data_dir(args))
    print(f"ingested {store.event_count} events, {len(store.objects)} objects -> {target}")
    return 0


def _open_store(args):
    store = load_dataset(_data_dir(args), args.dataset)
    cache = QueryCache(args.cache_dir) if getattr(args, "cache_dir", None) else QueryCache()
    return store, cache


def cmd_query(args) -> int:
    from .service import selection_payload

    store, cache = _open_store(args)
    payload = selection_payload(store, cache, args.query, args.vis)
    if args.json:
        print(json.dumps(payload, indent=2))
        return 0
    print(payload["count"])
    summary = payload.get("summary")
    if summary:
        if summary["kind"] == "categorical":
            for value, count in summary["counts"]:
                print(f"{value}\t{count}")
        else:
            box = summary["box"]
            if box:
                print(
                    f"min={box['min']:g} q1={box['q1']:g} median={box['median']:g} "
                    f"q3={box['q3']:g} max={box['max']:g}"
                )
    return 0


def cmd_matrix(args) -> int:
    from .service import matrix_payload

    store, cache = _open_store(args)
    payload = matrix_payload(store, cache, args.composite)
    width = max(len(p) for p in payload["parts"])
    for part, row in zip(payload["parts"], payload["percents"]):
        cells = " ".join(f"{p:3d}%" for p in row)
        print(f"{part:<{width}}  {cells}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        _data_dir(args),
        cache_dir=args.cache_dir,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heapscope",
        description="ingest object traces and answer compositional heap queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a built-in trace scenario")
    p.add_argument("scenario", choices=SCENARIO_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objects", type=int, default=None, help="random-soup object target")
    p.add_argument("--events", type=int, default=None, help="random-soup event target")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("ingest", help="load a trace file into a dataset directory")
    p.add_argument("tracefile")
    p.add_argument("--name", required=True)
    _add_data_dir(p)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("query", help="evaluate a query against a dataset")
    p.add_argument("dataset")
    p.add_argument("query")
    p.add_argument("--vis", default=None, help="object variable to summarize")
    p.add_argument("--json", action="store_true", help="print the full JSON payload")
    _add_data_dir(p)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("matrix", help="print the percent matrix of a composite query")
    p.add_argument("dataset")
    p.add_argument("composite")
    _add_data_dir(p)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(fn=cmd_matrix)

    p = sub.add_parser("serve", help="start the JSON API server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_data_dir(p)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--ui-dir", default=None, help="static UI bundle to serve at /")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
