"""Brute-force reference computations for tests and benchmarks.

Nothing here is efficient; everything here is meant to be obviously right.
"""

from __future__ import annotations

import math
import random
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .buffer import InvalidSequenceError
from .monitor import Event, Step
from .oplog import Op, op
from .regex import Alt, Char, Concat, Empty, Group, Star, parse_regex

INF = math.inf
RUN_CAP = 10**6


# -- trees ------------------------------------------------------------------


class FullTree:
    """Every node ever created, with parent links, depths and the Active set."""

    def __init__(self):
        self.parent: Dict[str, Optional[str]] = {}
        self.children: Dict[str, List[str]] = {}
        self.depth: Dict[str, int] = {}
        self.active: Dict[str, None] = {}
        self.order: List[str] = []

    def __len__(self):
        return len(self.order)

    def _node(self, x, parent):
        if x in self.parent:
            raise InvalidSequenceError(f"node {x!r} is not fresh")
        self.parent[x] = parent
        self.children[x] = []
        self.depth[x] = 0 if parent is None else self.depth[parent] + 1
        self.active[x] = None
        self.order.append(x)
        if parent is not None:
            self.children[parent].append(x)

    def _need_active(self, x):
        if x not in self.active:
            raise InvalidSequenceError(f"node {x!r} is not active")

    def initialize(self, x):
        if self.order:
            raise InvalidSequenceError("second init")
        self._node(x, None)

    def add_child(self, x, y):
        self._need_active(x)
        self._node(y, x)

    def deactivate(self, x):
        self._need_active(x)
        del self.active[x]

    def history(self, x, h):
        self._need_active(x)
        out = []
        while x is not None and len(out) < h:
            out.append(x)
            x = self.parent[x]
        return out[::-1]

    def apply(self, o: Op, h: int = 1):
        kind, args = o
        if kind == "init":
            self.initialize(args[0])
        elif not self.order:
            raise InvalidSequenceError(f"{kind} before init")
        elif kind == "add":
            self.add_child(*args)
        elif kind == "deact":
            self.deactivate(args[0])
        elif kind == "expand":
            for y in args[1:]:
                self.add_child(args[0], y)
            self.deactivate(args[0])
        elif kind == "hist":
            return self.history(args[0], h)
        return None


def primitive_ops(ops: Iterable[Op]) -> List[Op]:
    """Rewrite ``expand`` into its add/deact segment."""
    out = []
    for o in ops:
        if o.kind == "expand":
            out.extend(Op("add", (o.args[0], y)) for y in o.args[1:])
            out.append(Op("deact", (o.args[0],)))
        else:
            out.append(o)
    return out


def full_replay(ops: Iterable[Op]) -> FullTree:
    t = FullTree()
    for i, o in enumerate(ops):
        try:
            t.apply(o)
        except InvalidSequenceError as e:
            raise InvalidSequenceError(str(e), i) from None
    return t


def heights(t: FullTree) -> Dict[str, float]:
    """Distance from each node to the nearest active node in its subtree."""
    h = dict.fromkeys(t.order, INF)
    for a in t.active:
        d = 0
        x = a
        while x is not None and h[x] > d:
            h[x] = d
            x = t.parent[x]
            d += 1
    return h


def heights_by_search(t: FullTree) -> Dict[str, float]:
    """Same as :func:`heights`, by a breadth-first search below every node."""
    out = {}
    for x in t.order:
        frontier = [x]
        d = 0
        found = INF
        while frontier:
            if any(y in t.active for y in frontier):
                found = d
                break
            frontier = [c for y in frontier for c in t.children[y]]
            d += 1
        out[x] = found
    return out


def needed_set(t: FullTree, n: int) -> Set[str]:
    """Nodes of height < n: those within n-1 steps above some active node."""
    best: Dict[str, int] = {}
    for a in t.active:
        x = a
        d = 0
        while x is not None and d < n and best.get(x, n) > d:
            best[x] = d
            x = t.parent[x]
            d += 1
    return set(best)


def height_classes(t: FullTree) -> Dict[float, int]:
    """|H_i| for every finite height i."""
    out: Dict[float, int] = {}
    for v in heights(t).values():
        if v != INF:
            out[v] = out.get(v, 0) + 1
    return out


def representatives(t: FullTree, h: int) -> Tuple[Dict[str, str], Dict[str, int]]:
    rep: Dict[str, str] = {}
    for x in t.order:
        p = t.parent[x]
        rep[x] = x if t.depth[x] % h == 0 else rep[p]
    cnt = dict.fromkeys(t.order, 0)
    for a in t.active:
        cnt[rep[a]] += 1
    return rep, cnt


def recent_and_doomed(t: FullTree, h: int) -> Tuple[Set[str], Set[str]]:
    """Recent nodes have an active descendant at most one block deeper;
    doomed nodes are inactive with every child fringe or doomed."""
    level = {x: t.depth[x] // h for x in t.order}
    min_active_level: Dict[str, float] = {}
    for x in reversed(t.order):
        m = level[x] if x in t.active else INF
        for c in t.children[x]:
            m = min(m, min_active_level[c])
        min_active_level[x] = m
    recent = {x for x in t.order if min_active_level[x] <= level[x] + 1}
    _, cnt = representatives(t, h)
    fringe = {x for x in t.order if t.depth[x] % h == 0 and cnt[x] == 0}
    doomed: Set[str] = set()
    for x in reversed(t.order):
        if x not in t.active and all(c in fringe or c in doomed for c in t.children[x]):
            doomed.add(x)
    return recent, doomed


# -- random operation logs -----------------------------------------------------


def random_oplog(
    rng: random.Random,
    length: int,
    *,
    extensive: bool = False,
    deact_prob: float = 0.35,
    hist_prob: float = 0.15,
    recent_bias: float = 0.6,
    max_active: int = 24,
) -> List[Op]:
    """A valid log of about ``length`` operations.

    ``recent_bias`` is the chance of growing from one of the newest active
    nodes (deep, chain-like trees) rather than a uniformly chosen one.  In
    extensive mode a node is only deactivated right after receiving a child.
    """
    ops = [op("init", 0)]
    active = [0]
    fresh = 1

    def pick():
        if rng.random() < recent_bias:
            return active[-1 - rng.randrange(min(3, len(active)))]
        return rng.choice(active)

    while len(ops) < length and active:
        r = rng.random()
        x = pick()
        if r < hist_prob:
            ops.append(op("hist", x))
            continue
        crowded = len(active) >= max_active
        if extensive:
            if rng.random() < 0.25:
                n = rng.randint(1, 3)
                ys = list(range(fresh, fresh + n))
                fresh += n
                ops.append(op("expand", x, *ys))
                active.remove(x)
                active.extend(ys)
            else:
                y = fresh
                fresh += 1
                ops.append(op("add", x, y))
                active.append(y)
                if crowded or rng.random() < deact_prob:
                    ops.append(op("deact", x))
                    active.remove(x)
            continue
        if crowded or (r < hist_prob + deact_prob and len(active) > 1):
            ops.append(op("deact", x))
            active.remove(x)
        elif rng.random() < 0.2:
            n = rng.randint(0, 3)
            ys = list(range(fresh, fresh + n))
            fresh += n
            ops.append(op("expand", x, *ys))
            active.remove(x)
            active.extend(ys)
        else:
            ops.append(op("add", x, fresh))
            active.append(fresh)
            fresh += 1
    return ops


def random_full_tree(rng: random.Random, size: int) -> FullTree:
    """A random tree with a random Active set (not reachable by a valid log)."""
    t = FullTree()
    t._node("0", None)
    for i in range(1, size):
        if rng.random() < 0.5:
            p = t.order[-1 - rng.randrange(min(4, len(t.order)))]
        else:
            p = rng.choice(t.order)
        t._node(str(i), p)
    for x in t.order:
        if rng.random() > 0.3:
            del t.active[x]
    return t


# -- automata ------------------------------------------------------------------


class RunExplosionError(RuntimeError):
    pass


Run = Tuple[Tuple[object, str, object, bool, object], ...]


def enumerate_runs(nfa, word: List[Event], bound: int = RUN_CAP) -> List[Tuple[object, Run]]:
    """Every run of ``nfa`` over ``word`` as ``(final_state, transitions)``.

    A transition is ``(src, label, dst, relevant, location)``.
    """
    runs = [(nfa.initial, ())]
    visited = 1
    for e in word:
        nxt = []
        for q, path in runs:
            for t, rel in nfa.transitions(q, e):
                nxt.append((t, path + ((q, e.label, t, rel, e.location),)))
        visited += len(nxt)
        if visited > bound:
            raise RunExplosionError(f"more than {bound} run configurations")
        runs = nxt
    return runs


def reachable_sets(nfa, word: List[Event]) -> List[Set[object]]:
    """States reachable after each prefix of ``word``."""
    cur = {nfa.initial}
    out = []
    for e in word:
        cur = {t for q in cur for t, _ in nfa.transitions(q, e)}
        out.append(cur)
    return out


def trace_table(nfa, word: List[Event], h: int, bound: int = RUN_CAP) -> List[Dict[object, Set[Tuple[Step, ...]]]]:
    """For each prefix, accepting state -> possible last-h relevant suffixes."""
    configs = {(nfa.initial, ())}
    out = []
    for e in word:
        new = set()
        for q, suf in configs:
            for t, rel in nfa.transitions(q, e):
                if rel:
                    new.add((t, (suf + (Step(q, e.label, t, e.location),))[-h:]))
                else:
                    new.add((t, suf))
        if len(new) > bound:
            raise RunExplosionError(f"more than {bound} configurations")
        configs = new
        table: Dict[object, Set[Tuple[Step, ...]]] = {}
        for q, suf in configs:
            if nfa.is_accepting(q):
                table.setdefault(q, set()).add(suf)
        out.append(table)
    return out


def is_valid_error_trace(nfa, word: List[Event], trace, h: int, state=None) -> bool:
    """Does some accepting run over ``word`` end with exactly ``trace``
    as its last min(h, #relevant) relevant transitions?"""
    trace = tuple(trace)
    if len(trace) > h:
        return False
    if not word:
        return False
    runs = enumerate_runs(nfa, word)
    for q, path in runs:
        if not nfa.is_accepting(q) or (state is not None and q != state):
            continue
        rel = [Step(s, lab, d, loc) for s, lab, d, r, loc in path if r]
        if tuple(rel[-h:]) == trace:
            return True
    return False


class ExplicitNfa:
    """An automaton given by an explicit table ``(state, event) -> [(dst, relevant)]``."""

    def __init__(self, initial, accepting, table):
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.table = table

    def is_accepting(self, state):
        return state in self.accepting

    def transitions(self, state, event):
        return self.table.get((state, (event.symbol, event.value)), [])


def truncated_hasnext(values: int) -> ExplicitNfa:
    """The iterator property over object values ``1..values`` as an explicit table."""
    from .automata import ERROR, START, HasNextState

    ks = range(1, values + 1)
    events = [(name, k) for name in ("iter", "hasNext", "next", "other") for k in ks]
    table: Dict[tuple, list] = {}

    def add(src, ev, dst, rel):
        table.setdefault((src, ev), []).append((dst, rel))

    # start and error loop on everything
    for ev in events:
        add(START, ev, START, False)
    for k in ks:
        add(START, ("iter", k), HasNextState("invalid", k), True)
    for ev in events:
        add(ERROR, ev, ERROR, False)
    for k in ks:
        inv, val = HasNextState("invalid", k), HasNextState("valid", k)
        add(inv, ("next", k), ERROR, True)
        add(inv, ("hasNext", k), val, True)
        add(val, ("next", k), inv, True)
        for ev in events:
            if ev not in (("hasNext", k), ("next", k)):
                add(inv, ev, inv, False)
            if ev != ("next", k):
                add(val, ev, val, False)
    return ExplicitNfa(START, [ERROR], table)


# -- regex capture starts ----------------------------------------------------------


def brute_capture_starts(pattern: str, text: str, h: int) -> Dict[int, Set[Tuple[int, ...]]]:
    """Map every match end position to the possible last-h group start lists.

    A group start is recorded at index p when the match enters at least one
    group between consuming text[p-1] and text[p].  The matcher is a direct
    set-valued interpretation of the pattern, independent of any automaton.
    """
    ast = parse_regex(pattern)
    n = len(text)
    memo: Dict[tuple, Dict[tuple, FrozenSet]] = {}

    def join(left, right, out):
        # every left start list followed by every right one, keeping the last h
        for s2 in right:
            if len(s2) >= h:
                out.add(s2[-h:])
            else:
                for s1 in left:
                    t = s1 + s2
                    out.add(t[-h:] if len(t) > h else t)

    def run(node, i, pending):
        """{(end, pending): start lists} for matching ``node`` from i."""
        key = (id(node), i, pending)
        if key in memo:
            return memo[key]
        res: Dict[tuple, set] = {}
        if isinstance(node, Empty):
            res[(i, pending)] = {()}
        elif isinstance(node, Char):
            if i < n and node.matcher.matches(text[i]):
                res[(i + 1, False)] = {(i,) if pending else ()}
        elif isinstance(node, Group):
            res = {k: set(v) for k, v in run(node.body, i, True).items()}
        elif isinstance(node, Alt):
            for o in node.options:
                for k, v in run(o, i, pending).items():
                    res.setdefault(k, set()).update(v)
        elif isinstance(node, Concat):
            res[(i, pending)] = {()}
            for item in node.items:
                nxt: Dict[tuple, set] = {}
                for (j, p), left in res.items():
                    for k, right in run(item, j, p).items():
                        join(left, right, nxt.setdefault(k, set()))
                res = nxt
        elif isinstance(node, Star):
            res[(i, pending)] = {()}
            todo = [((i, pending), {()})]
            while todo:
                (j, p), delta = todo.pop()
                for k, right in run(node.body, j, p).items():
                    combos: Set[tuple] = set()
                    join(delta, right, combos)
                    have = res.setdefault(k, set())
                    fresh = combos - have
                    if fresh:
                        have |= fresh
                        todo.append((k, fresh))
        else:  # pragma: no cover
            raise TypeError(node)
        out = {k: frozenset(v) for k, v in res.items() if v}
        memo[key] = out
        return out

    found: Dict[int, Set[Tuple[int, ...]]] = {}
    for start in range(n + 1):
        for (end, _), starts in run(ast, start, False).items():
            if end >= 1:
                found.setdefault(end - 1, set()).update(starts)
    return found
