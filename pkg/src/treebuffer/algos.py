"""Space-efficient tree buffer algorithms: gc, amortized and real-time."""

from __future__ import annotations

from collections import deque
from operator import attrgetter

from .buffer import NodeId, TreeBuffer

_parent_of = attrgetter("parent")


class GcBuffer(TreeBuffer):
    """Collects garbage after every deactivation.

    Memory is exactly the set of nodes a future ``history`` call can return,
    but a single deactivation may cost time proportional to the number of
    active nodes.
    """

    algorithm = "gc"

    def _deact(self, x: NodeId) -> None:
        self._retire(x)
        self._release_if_dead(x)
        self._collect()

    def collect(self) -> None:
        """Run one collection as a standalone (instrumented) operation."""
        self._begin()
        self._collect()
        self._end()

    def release_if_dead(self, x: NodeId) -> None:
        """Remove ``x`` if it is inactive and childless, cascading upward."""
        self._begin()
        self._release_if_dead(x)
        self._end()

    def _collect(self) -> None:
        # Breadth-first walk up from the active nodes for h-1 levels.  What
        # remains in `level` afterwards are the nodes of height exactly h-1;
        # everything above them is unreachable by history.
        nodes = self._nodes
        level = list(self._active)
        seen = set(level)
        self._refs += 2 * len(level)
        i = 1
        while i < self.h and level:
            parents = dict.fromkeys(map(_parent_of, map(nodes.__getitem__, level)))
            nxt = [x for x in parents if x is not None and x not in seen]
            seen.update(nxt)
            self._refs += 2 * len(level) + 2 * len(nxt)
            level = nxt
            i += 1
        for y in level:
            self._delete_parent(y)

    def _delete_parent(self, y: NodeId) -> None:
        rec = self._nodes[y]
        x = rec.parent
        self._refs += 1
        if x is None:
            return
        rec.parent = None
        self._nodes[x].children -= 1
        self._refs += 3
        self._release_if_dead(x)

    def _release_if_dead(self, x: NodeId) -> None:
        nodes = self._nodes
        while True:
            rec = nodes[x]
            self._refs += 2
            if rec.children or rec.active:
                return
            parent = rec.parent
            del nodes[x]
            self.mem -= 1
            self._refs += 2
            if parent is None:
                return
            nodes[parent].children -= 1
            self._refs += 2
            x = parent


class AmortizedBuffer(GcBuffer):
    """Collects only when memory has doubled since the last collection."""

    algorithm = "amortized"

    def _add(self, x: NodeId, payload) -> NodeId:
        y = TreeBuffer._add(self, x, payload)
        self._amortized_trigger()
        return y

    def _deact(self, x: NodeId) -> None:
        self._retire(x)
        self._release_if_dead(x)

    def _amortized_trigger(self) -> bool:
        if self.mem == 2 * self.mem_old:
            self._collect()
            self.mem_old = self.mem
            return True
        return False


class RealtimeBuffer(TreeBuffer):
    """Constant worst-case work per operation.

    Nodes are grouped into blocks of ``h`` consecutive depths.  Each block's
    top node (its representative) counts the active nodes in the block; when
    that count reaches zero the block is severed from its parent.  Childless
    inactive nodes are put on a queue and at most one is deleted per
    modifying operation.
    """

    algorithm = "realtime"

    def __init__(self, h: int, record: bool = False):
        super().__init__(h, record=record)
        self._queue: deque = deque()

    @property
    def queue_length(self) -> int:
        return len(self._queue)

    def _on_init(self, x: NodeId) -> None:
        rec = self._nodes[x]
        rec.depth = 0
        rec.rep = x
        rec.cnt = 1
        self._refs += 3

    def _add(self, x: NodeId, payload) -> NodeId:
        nodes = self._nodes
        y = self._alloc(x, payload)
        ry = nodes[y]
        self._activate(y)
        rx = nodes[x]
        rx.children += 1
        d = rx.depth + 1
        ry.depth = d
        self._refs += 5  # cnt(y) := 0, children(x) r/w, depth(x), depth(y)
        if d % self.h == 0:
            rep = y
            self._refs += 1
        else:
            rep = rx.rep
            self._refs += 2
        ry.rep = rep
        nodes[rep].cnt += 1
        self._refs += 2
        self.mem += 1
        self._process_queue()
        return y

    def _deact(self, x: NodeId) -> None:
        nodes = self._nodes
        self._retire(x)
        rec = nodes[x]
        r = rec.rep
        rr = nodes[r]
        rr.cnt -= 1
        self._refs += 4  # rep(x), cnt r/w, children(x)
        if rec.children == 0:
            self._enqueue(x)
        if rr.cnt == 0:
            self._cut_parent(r)
        self._process_queue()

    def _enqueue(self, x: NodeId) -> None:
        self._queue.append(x)
        self._refs += 1

    def _cut_parent(self, y: NodeId) -> None:
        nodes = self._nodes
        ry = nodes[y]
        x = ry.parent
        self._refs += 1
        if x is not None:
            rx = nodes[x]
            rx.children -= 1
            self._refs += 3  # children r/w, Active test
            if rx.children == 0 and not rx.active:
                self._enqueue(x)
        ry.parent = None
        self._refs += 1

    def _process_queue(self) -> None:
        if self._queue:
            x = self._queue.popleft()
            self._refs += 1
            self._cut_parent(x)
            del self._nodes[x]
            self.mem -= 1
            self._refs += 1
