"""Tree buffers: bounded ancestor history over a growing tree, plus an
error-trace-reporting monitor for nondeterministic automata."""

from .algos import AmortizedBuffer, GcBuffer, RealtimeBuffer
from .automata import (
    BUILTINS,
    FiniteNfa,
    HasNextNfa,
    NfaSyntaxError,
    builtin,
    hasnext_nfa,
    parse_nfa,
    parse_rv_trace,
    search,
    serialize_nfa,
)
from .buffer import (
    ALGORITHMS,
    InvalidParameterError,
    InvalidSequenceError,
    Metrics,
    NaiveBuffer,
    TreeBuffer,
    TreeBufferError,
    create,
)
from .monitor import ErrorReport, Event, Monitor, Step, run_stream, text_events
from .oplog import Op, format_oplog, op, parse_oplog, replay, validate_oplog
from .regex import RegexSyntaxError, compile_regex

__version__ = "0.1.0"
