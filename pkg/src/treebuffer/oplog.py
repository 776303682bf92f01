"""Symbolic operation logs: text format, validity check and replay.

One operation per line, ``#`` starts a comment::

    init 0
    add 0 1
    deact 0
    expand 1 2 3
    hist 2
"""

from __future__ import annotations

from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .buffer import InvalidSequenceError, NodeId, TreeBuffer

KINDS = ("init", "add", "deact", "expand", "hist")
_ARITY = {"init": (1, 1), "add": (2, 2), "deact": (1, 1), "expand": (1, None), "hist": (1, 1)}


class Op(NamedTuple):
    kind: str
    args: Tuple[str, ...]

    def __str__(self):
        return " ".join((self.kind,) + tuple(str(a) for a in self.args))


def op(kind: str, *args) -> Op:
    return Op(kind, tuple(str(a) for a in args))


class OpLogSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_oplog(text: str) -> List[Op]:
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        if kind not in _ARITY:
            raise OpLogSyntaxError(f"unknown operation {kind!r}", lineno)
        lo, hi = _ARITY[kind]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise OpLogSyntaxError(f"wrong number of arguments for {kind!r}", lineno)
        ops.append(Op(kind, tuple(args)))
    return ops


def format_oplog(ops: Iterable[Op]) -> str:
    return "".join(f"{o}\n" for o in ops)


def validate_oplog(ops: Iterable[Op]) -> None:
    """Raise InvalidSequenceError naming the first invalid operation."""
    seen = set()
    active = set()
    started = False
    for i, o in enumerate(ops):
        kind, args = o
        if kind == "init":
            if started:
                raise InvalidSequenceError("second init", i)
            started = True
            seen.add(args[0])
            active.add(args[0])
            continue
        if not started:
            raise InvalidSequenceError(f"{kind} before init", i)
        x = args[0]
        if x not in active:
            raise InvalidSequenceError(f"node {x!r} is not active", i)
        if kind in ("add", "expand"):
            fresh = args[1:]
            if len(set(fresh)) != len(fresh) or any(y in seen for y in fresh):
                raise InvalidSequenceError("child name is not fresh", i)
            seen.update(fresh)
            active.update(fresh)
        if kind in ("deact", "expand"):
            active.discard(x)


def is_extensive(ops: Iterable[Op]) -> bool:
    """True if every deactivate(x) directly follows an add_child(x, .)."""
    prev = None
    for o in ops:
        if o.kind == "hist":
            continue
        if o.kind == "deact" and not (prev is not None and prev.kind == "add" and prev.args[0] == o.args[0]):
            return False
        if o.kind == "expand" and len(o.args) < 2:
            return False
        prev = o
    return True


class Replayer:
    """Applies symbolic operations to a buffer, mapping names to NodeIds."""

    def __init__(self, buffer: TreeBuffer):
        self.buffer = buffer
        self.ids: Dict[str, NodeId] = {}
        self.index = 0

    def apply(self, o: Op) -> Optional[List[str]]:
        i = self.index
        self.index += 1
        kind, args = o
        b = self.buffer
        try:
            if kind == "init":
                self._fresh(args, i)
                self.ids[args[0]] = b.initialize(args[0])
                return None
            x = self.ids.get(args[0])
            if x is None:
                raise InvalidSequenceError(f"unknown node {args[0]!r}")
            if not b.is_active(x):
                raise InvalidSequenceError(f"node {args[0]!r} is not active")
            if kind == "add":
                self._fresh(args[1:], i)
                self.ids[args[1]] = b.add_child(x, args[1])
            elif kind == "deact":
                b.deactivate(x)
            elif kind == "expand":
                self._fresh(args[1:], i)
                for name, y in zip(args[1:], b.expand(x, args[1:])):
                    self.ids[name] = y
            elif kind == "hist":
                return [p for _, p in b.history(x)]
            else:
                raise InvalidSequenceError(f"unknown operation {kind!r}")
        except InvalidSequenceError as e:
            if e.index is not None:
                raise
            raise InvalidSequenceError(str(e), i) from None
        return None

    def _fresh(self, names, i):
        if len(set(names)) != len(names) or any(n in self.ids for n in names):
            raise InvalidSequenceError("node name is not fresh", i)


def replay(buffer: TreeBuffer, ops: Iterable[Op]) -> List[List[str]]:
    """Apply ``ops`` in order and collect the result of every ``hist``."""
    r = Replayer(buffer)
    out = []
    for o in ops:
        res = r.apply(o)
        if res is not None:
            out.append(res)
    return out
