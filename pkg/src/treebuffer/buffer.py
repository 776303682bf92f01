"""Tree buffer interface, node storage, instrumentation and the naive algorithm.

A tree buffer stores a growing tree and answers ``history(x)`` queries: the
``h`` nearest ancestors of an active node ``x`` (``x`` included), oldest
first.  Every algorithm behaves identically on valid operation sequences;
they differ only in how much of the tree they keep and how much work each
operation costs.

Work is measured in *memory references*.  One reference is one read or
write of a node field, one Active-set membership test/insert/remove, one
queue enqueue/dequeue, or one element visit in a collector's scratch
structures.
"""

from __future__ import annotations

import dataclasses
from typing import Any, Dict, List, Optional, Tuple

ALGORITHMS = ("naive", "gc", "amortized", "realtime")

NodeId = int


class TreeBufferError(Exception):
    """Base class for tree buffer errors."""


class InvalidParameterError(TreeBufferError, ValueError):
    pass


class InvalidSequenceError(TreeBufferError):
    """Raised when an operation is not allowed by the preceding sequence."""

    def __init__(self, message: str, index: Optional[int] = None):
        if index is not None:
            message = f"op {index}: {message}"
        super().__init__(message)
        self.index = index


@dataclasses.dataclass(slots=True)
class NodeRecord:
    parent: Optional[NodeId]
    children: int = 0
    active: bool = True
    payload: Any = None
    # real-time bookkeeping
    depth: int = 0
    rep: Optional[NodeId] = None
    cnt: int = 0


def bucket_of(refs: int) -> int:
    """Lower bound of the power-of-two histogram bucket holding ``refs``."""
    if refs <= 0:
        return 0
    return 1 << (refs.bit_length() - 1)


def bucket_bounds(lo: int) -> Tuple[int, int]:
    """Inclusive ``(lo, hi)`` range of the bucket starting at ``lo``."""
    if lo == 0:
        return 0, 0
    return lo, 2 * lo - 1


@dataclasses.dataclass
class Metrics:
    total_refs: int = 0
    last_op_refs: int = 0
    max_op_refs: int = 0
    op_count: int = 0
    peak_nodes: int = 0
    cur_nodes: int = 0
    histogram: Dict[int, int] = dataclasses.field(default_factory=dict)

    @property
    def avg_refs_per_op(self) -> float:
        return self.total_refs / self.op_count if self.op_count else 0.0

    def copy(self) -> "Metrics":
        return dataclasses.replace(self, histogram=dict(self.histogram))


class TreeBuffer:
    """Common machinery; the operations themselves follow the naive algorithm.

    Subclasses override ``_add`` and ``_deact`` (and optionally ``_on_init``)
    to change what is kept in memory.
    """

    algorithm = "naive"

    def __init__(self, h: int, record: bool = False):
        if isinstance(h, bool) or not isinstance(h, int) or h < 1:
            raise InvalidParameterError(f"history depth must be a positive integer, got {h!r}")
        self.h = h
        self._nodes: Dict[NodeId, NodeRecord] = {}
        self._active: Dict[NodeId, None] = {}  # insertion-ordered set
        self._next_id = 0
        self._initialized = False
        self.mem = 0
        self.mem_old = 0
        self._refs = 0
        self._op_start = 0
        self._metrics = Metrics()
        # Operation log in terms of NodeIds, for oracle replays.
        self.log: Optional[List[tuple]] = [] if record else None

    def __repr__(self):
        return f"<{type(self).__name__} h={self.h} nodes={len(self._nodes)} active={len(self._active)}>"

    # -- public operations -------------------------------------------------

    def initialize(self, payload: Any = None) -> NodeId:
        if self._initialized:
            raise InvalidSequenceError("buffer is already initialized")
        self._initialized = True
        self._begin()
        x = self._alloc(None, payload)
        self._activate(x)
        self.mem = self.mem_old = 1
        self._on_init(x)
        self._touch_peak()
        if self.log is not None:
            self.log.append(("init", x))
        self._end()
        return x

    def add_child(self, x: NodeId, payload: Any = None) -> NodeId:
        self._require_active(x)
        self._begin()
        self._refs += 1
        y = self._add(x, payload)
        self._touch_peak()
        if self.log is not None:
            self.log.append(("add", x, y))
        self._end()
        return y

    def deactivate(self, x: NodeId) -> None:
        self._require_active(x)
        self._begin()
        self._refs += 1
        self._deact(x)
        if self.log is not None:
            self.log.append(("deact", x))
        self._end()

    def expand(self, x: NodeId, payloads=()) -> List[NodeId]:
        """Add one child per payload under ``x``, then deactivate ``x``."""
        self._require_active(x)
        self._begin()
        self._refs += 1
        ys = []
        for p in payloads:
            ys.append(self._add(x, p))
            self._touch_peak()
        self._deact(x)
        if self.log is not None:
            self.log.append(("expand", x, *ys))
        self._end()
        return ys

    def history(self, x: NodeId) -> List[Tuple[NodeId, Any]]:
        """Return ``x`` and its nearest ancestors, at most ``h`` nodes, oldest first."""
        self._require_active(x)
        self._begin()
        self._refs += 1
        nodes = self._nodes
        out = []
        for _ in range(self.h):
            rec = nodes[x]
            out.append((x, rec.payload))
            self._refs += 2
            x = rec.parent
            if x is None:
                break
        out.reverse()
        if self.log is not None:
            self.log.append(("hist", out[-1][0]))
        self._end()
        return out

    def stats(self) -> Metrics:
        return self._metrics.copy()

    # -- inspection (not instrumented) ---------------------------------------

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, x):
        return x in self._nodes

    def nodes(self) -> List[NodeId]:
        return list(self._nodes)

    def active_nodes(self) -> List[NodeId]:
        return list(self._active)

    def is_active(self, x: NodeId) -> bool:
        return x in self._active

    def payload(self, x: NodeId) -> Any:
        return self._nodes[x].payload

    def record(self, x: NodeId) -> NodeRecord:
        """A copy of the bookkeeping for ``x``."""
        return dataclasses.replace(self._nodes[x])

    # -- the naive algorithm ---------------------------------------------------

    def _on_init(self, x: NodeId) -> None:
        pass

    def _add(self, x: NodeId, payload: Any) -> NodeId:
        y = self._alloc(x, payload)
        self._nodes[x].children += 1
        self._refs += 2
        self._activate(y)
        self.mem += 1
        return y

    def _deact(self, x: NodeId) -> None:
        self._retire(x)

    # -- helpers ---------------------------------------------------------------

    def _require_active(self, x: NodeId) -> None:
        if not self._initialized:
            raise InvalidSequenceError("buffer is not initialized")
        if x not in self._active:
            if x in self._nodes:
                raise InvalidSequenceError(f"node {x!r} is not active")
            raise InvalidSequenceError(f"node {x!r} is unknown or was reclaimed")

    def _alloc(self, parent: Optional[NodeId], payload: Any) -> NodeId:
        y = self._next_id
        self._next_id += 1
        self._nodes[y] = NodeRecord(parent, payload=payload)
        self._refs += 2  # parent(y), children(y)
        return y

    def _activate(self, y: NodeId) -> None:
        self._active[y] = None
        self._refs += 1

    def _retire(self, x: NodeId) -> None:
        del self._active[x]
        self._nodes[x].active = False
        self._refs += 1

    def _touch_peak(self) -> None:
        n = len(self._nodes)
        if n > self._metrics.peak_nodes:
            self._metrics.peak_nodes = n

    def _begin(self) -> None:
        self._op_start = self._refs

    def _end(self) -> None:
        m = self._metrics
        per = self._refs - self._op_start
        m.total_refs = self._refs
        m.last_op_refs = per
        if per > m.max_op_refs:
            m.max_op_refs = per
        m.op_count += 1
        b = bucket_of(per)
        m.histogram[b] = m.histogram.get(b, 0) + 1
        m.cur_nodes = len(self._nodes)


class NaiveBuffer(TreeBuffer):
    """Keeps every node forever."""


def create(h: int, algorithm: str = "naive", record: bool = False) -> TreeBuffer:
    """Build an empty tree buffer using one of ``ALGORITHMS``."""
    from .algos import AmortizedBuffer, GcBuffer, RealtimeBuffer

    classes = {
        "naive": NaiveBuffer,
        "gc": GcBuffer,
        "amortized": AmortizedBuffer,
        "realtime": RealtimeBuffer,
    }
    try:
        cls = classes[algorithm]
    except KeyError:
        raise InvalidParameterError(
            f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}"
        ) from None
    return cls(h, record=record)
