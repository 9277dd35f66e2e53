"""heapscope: trace once, query often.

Ingest comprehensive object-level program traces into immutable datasets,
then answer compositional heap queries (mutability, uniqueness,
reachability, dominance-style containment, stationarity) repeatedly and
cheaply through a caching query engine, a JSON web service, and a CLI.
"""

from .cache import QueryCache
from .codec import decode_trace, decode_trace_bytes, encode_trace, encode_trace_bytes
from .engine import SelectionResult, evaluate
from .oracle import brute_force_oracle
from .queries import Query, canonicalize, parse, to_text
from .scenarios import builtin_scenario
from .store import DatasetStore, ingest, object_variable
from .toyprogram import ToyProgram, run_program

__all__ = [
    "DatasetStore",
    "Query",
    "QueryCache",
    "SelectionResult",
    "ToyProgram",
    "brute_force_oracle",
    "builtin_scenario",
    "canonicalize",
    "decode_trace",
    "decode_trace_bytes",
    "encode_trace",
    "encode_trace_bytes",
    "evaluate",
    "ingest",
    "object_variable",
    "parse",
    "run_program",
    "to_text",
]

__version__ = "0.1.0"
