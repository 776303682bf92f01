"""Regular expressions with capturing groups, compiled to automata whose
relevant transitions mark where group instances start.

Supported syntax: literals, ``.``, ``[...]`` and ``[^...]``, groups
``(...)``, alternation ``|``, quantifiers ``*``, ``+``, ``?``, ``{m}``,
``{m,}``, ``{m,n}``, and backslash escapes of punctuation plus ``\\n``,
``\\t``, ``\\r``.  Matching is unanchored (search semantics).
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from typing import List, Tuple

from .symbols import SymbolMatcher, SymbolSyntaxError, parse_class, unescape

MAX_NESTING = 32
MAX_REPEAT = 1000
MAX_STATES = 200_000


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# AST nodes compare by identity so they can key memo tables cheaply.


@dataclasses.dataclass(eq=False)
class Empty:
    pass


@dataclasses.dataclass(eq=False)
class Char:
    matcher: SymbolMatcher


@dataclasses.dataclass(eq=False)
class Concat:
    items: Tuple


@dataclasses.dataclass(eq=False)
class Alt:
    options: Tuple


@dataclasses.dataclass(eq=False)
class Star:
    body: object


@dataclasses.dataclass(eq=False)
class Group:
    body: object
    index: int


class _Parser:
    def __init__(self, pattern: str):
        self.s = pattern
        self.i = 0
        self.groups = 0
        self.depth = 0

    def parse(self):
        node = self.alt()
        if self.i < len(self.s):
            raise RegexSyntaxError("unbalanced ')'", self.i)
        return node

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else None

    def alt(self):
        options = [self.concat()]
        while self.peek() == "|":
            self.i += 1
            options.append(self.concat())
        return options[0] if len(options) == 1 else Alt(tuple(options))

    def concat(self):
        items = []
        while self.peek() not in (None, "|", ")"):
            items.append(self.repeat())
        if not items:
            return Empty()
        return items[0] if len(items) == 1 else Concat(tuple(items))

    def repeat(self):
        node = self.atom()
        c = self.peek()
        if c is None or c not in "*+?{":
            return node
        if c == "*":
            self.i += 1
            node = Star(node)
        elif c == "+":
            self.i += 1
            node = Concat((node, Star(node)))
        elif c == "?":
            self.i += 1
            node = Alt((node, Empty()))
        else:
            lo, hi = self.braces()
            node = _expand_repeat(node, lo, hi)
        if self.peek() is not None and self.peek() in "*+?{":
            raise RegexSyntaxError("multiple repeat", self.i)
        return node

    def braces(self):
        start = self.i
        j = self.s.find("}", self.i)
        if j < 0:
            raise RegexSyntaxError("unterminated repetition", start)
        body = self.s[self.i + 1 : j]
        self.i = j + 1
        parts = body.split(",")
        try:
            if len(parts) == 1:
                lo = hi = int(parts[0])
            elif len(parts) == 2:
                lo = int(parts[0]) if parts[0] else 0
                hi = int(parts[1]) if parts[1] else None
            else:
                raise ValueError
        except ValueError:
            raise RegexSyntaxError("bad repetition", start) from None
        if lo < 0 or (hi is not None and hi < lo) or max(lo, hi or 0) > MAX_REPEAT:
            raise RegexSyntaxError("bad repetition bounds", start)
        return lo, hi

    def atom(self):
        c = self.peek()
        pos = self.i
        if c == "(":
            self.i += 1
            self.depth += 1
            if self.depth > MAX_NESTING:
                raise RegexSyntaxError("nesting too deep", pos)
            self.groups += 1
            index = self.groups
            body = self.alt()
            if self.peek() != ")":
                raise RegexSyntaxError("missing ')'", pos)
            self.i += 1
            self.depth -= 1
            return Group(body, index)
        if c == "[":
            try:
                m, self.i = parse_class(self.s, self.i, space_alias=False)
            except SymbolSyntaxError as e:
                raise RegexSyntaxError(str(e).rsplit(" at position", 1)[0], e.pos) from None
            return Char(m)
        if c == ".":
            self.i += 1
            return Char(SymbolMatcher.wildcard())
        if c == "\\":
            if self.i + 1 >= len(self.s):
                raise RegexSyntaxError("dangling escape", pos)
            try:
                ch = unescape(self.s[self.i + 1], pos)
            except SymbolSyntaxError as e:
                raise RegexSyntaxError(str(e).rsplit(" at position", 1)[0], pos) from None
            self.i += 2
            return Char(SymbolMatcher.literal(ch))
        if c in "*+?{":
            raise RegexSyntaxError("nothing to repeat", pos)
        if c in "^$":
            raise RegexSyntaxError(f"unsupported anchor {c!r}", pos)
        self.i += 1
        return Char(SymbolMatcher.literal(c))


def _expand_repeat(node, lo, hi):
    items = [node] * lo
    if hi is None:
        items.append(Star(node))
    else:
        items.extend(Alt((node, Empty())) for _ in range(hi - lo))
    if not items:
        return Empty()
    return items[0] if len(items) == 1 else Concat(tuple(items))


def parse_regex(pattern: str):
    """Parse ``pattern`` into an AST; raise RegexSyntaxError on bad input."""
    return _Parser(pattern).parse()


class _Thompson:
    def __init__(self):
        self.n = 0
        self.eps = defaultdict(list)  # state -> [(target, opens_group)]
        self.edges = defaultdict(list)  # state -> [(matcher, target)]

    def state(self) -> int:
        self.n += 1
        if self.n > MAX_STATES:
            raise RegexSyntaxError("pattern too large", 0)
        return self.n - 1

    def build(self, node, s, e):
        # iterative to stay clear of the recursion limit on long concatenations
        work = [(node, s, e)]
        while work:
            node, s, e = work.pop()
            if isinstance(node, Empty):
                self.eps[s].append((e, False))
            elif isinstance(node, Char):
                self.edges[s].append((node.matcher, e))
            elif isinstance(node, Concat):
                cur = s
                for item in node.items[:-1]:
                    m = self.state()
                    work.append((item, cur, m))
                    cur = m
                work.append((node.items[-1], cur, e))
            elif isinstance(node, Alt):
                for opt in node.options:
                    a, b = self.state(), self.state()
                    self.eps[s].append((a, False))
                    self.eps[b].append((e, False))
                    work.append((opt, a, b))
            elif isinstance(node, Group):
                a, b = self.state(), self.state()
                self.eps[s].append((a, True))
                self.eps[b].append((e, False))
                work.append((node.body, a, b))
            elif isinstance(node, Star):
                a, b = self.state(), self.state()
                self.eps[s].append((a, False))
                self.eps[a].append((e, False))
                self.eps[b].append((a, False))
                work.append((node.body, a, b))
            else:  # pragma: no cover
                raise TypeError(node)

    def closure(self, s, final):
        """Consuming edges reachable from ``s`` through epsilon moves.

        Each edge is tagged with whether the epsilon path entered a group.
        """
        out = []
        emitted = set()
        accepting = False
        stack = [(s, False)]
        visited = {(s, False)}
        while stack:
            u, opened = stack.pop()
            if u == final:
                accepting = True
            for m, v in self.edges[u]:
                key = (m, v, opened)
                if key not in emitted:
                    emitted.add(key)
                    out.append(key)
            for v, marks in reversed(self.eps[u]):
                item = (v, opened or marks)
                if item not in visited:
                    visited.add(item)
                    stack.append(item)
        return out, accepting


def compile_regex(pattern: str):
    """Compile ``pattern`` into a FiniteNfa for unanchored search.

    The initial state loops on every character (irrelevant).  A transition
    is relevant iff it consumes the first character of a capture group
    instance, so a run's relevant transitions are located at the group
    start positions.
    """
    from .automata import FiniteNfa, Row

    ast = parse_regex(pattern)
    t = _Thompson()
    q0 = t.state()
    t.edges[q0].append((SymbolMatcher.wildcard(), q0))
    p = t.state()
    t.eps[q0].append((p, False))
    final = t.state()
    t.build(ast, p, final)

    names = {q0: "0"}
    order = [q0]
    rows: List[Row] = []
    accepting = []
    k = 0
    while k < len(order):
        s = order[k]
        k += 1
        edges, acc = t.closure(s, final)
        if acc:
            accepting.append(names[s])
        for m, v, rel in edges:
            if v not in names:
                names[v] = str(len(order))
                order.append(v)
            rows.append(Row(names[s], m, names[v], rel))
    states = tuple(names[s] for s in order)
    return FiniteNfa(states, "0", frozenset(accepting), tuple(rows))
