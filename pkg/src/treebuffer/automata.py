"""Automata with relevant and irrelevant transitions.

Three sources: a line-oriented text format for finite automata, the regex
compiler in :mod:`treebuffer.regex`, and the infinite-state configuration
graph of the iterator ``hasNext`` property, generated on the fly.
"""

from __future__ import annotations

import dataclasses
import json
from importlib import resources
from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

from .monitor import Event, Monitor, text_events
from .regex import compile_regex
from .symbols import SymbolMatcher, SymbolSyntaxError, parse_symbol

__all__ = [
    "Row",
    "FiniteNfa",
    "NfaSyntaxError",
    "parse_nfa",
    "serialize_nfa",
    "compile_regex",
    "HasNextState",
    "HasNextNfa",
    "hasnext_nfa",
    "builtin",
    "BUILTINS",
    "search",
    "parse_rv_trace",
    "format_rv_trace",
]


class Row(NamedTuple):
    src: str
    matcher: SymbolMatcher
    dst: str
    relevant: bool


class NfaSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclasses.dataclass(frozen=True)
class FiniteNfa:
    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    rows: Tuple[Row, ...]

    def __post_init__(self):
        table: Dict[str, List[Row]] = {}
        for r in self.rows:
            table.setdefault(r.src, []).append(r)
        object.__setattr__(self, "_table", table)

    def is_accepting(self, state) -> bool:
        return state in self.accepting

    def transitions(self, state, event) -> List[Tuple[str, bool]]:
        c = event.symbol
        return [(r.dst, r.relevant) for r in self._table.get(state, ()) if r.matcher.matches(c)]

    @property
    def alphabet_hint(self) -> FrozenSet[str]:
        out = set()
        for r in self.rows:
            if r.matcher.kind != "any" and not r.matcher.negated:
                out |= r.matcher.chars
        return frozenset(out)


def parse_nfa(text: str) -> FiniteNfa:
    """Parse the automaton file format.

    ::

        states: 1 2 3
        initial: 1
        accepting: 3
        trans: 1 a 2 R
        trans: 2 [^_] 2 I     # `_` is a space; `.` is any character
    """
    states: List[str] = []
    initial = None
    accepting: List[str] = []
    rows: List[Tuple[int, str, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise NfaSyntaxError(f"expected 'key: value', got {line!r}", lineno)
        key = key.strip()
        fields = rest.split()
        if key == "states":
            states.extend(fields)
        elif key == "initial":
            if len(fields) != 1 or initial is not None:
                raise NfaSyntaxError("exactly one initial state expected", lineno)
            initial = (fields[0], lineno)
        elif key == "accepting":
            accepting.extend((f, lineno) for f in fields)
        elif key == "trans":
            if len(fields) != 4:
                raise NfaSyntaxError("trans needs: <src> <sym> <dst> <R|I>", lineno)
            rows.append((lineno, *fields))
        else:
            raise NfaSyntaxError(f"unknown key {key!r}", lineno)
    declared = set(states)
    if len(declared) != len(states):
        raise NfaSyntaxError("duplicate state", 1)
    if initial is None:
        raise NfaSyntaxError("missing initial state", 1)
    if initial[0] not in declared:
        raise NfaSyntaxError(f"undeclared state {initial[0]!r}", initial[1])
    for name, lineno in accepting:
        if name not in declared:
            raise NfaSyntaxError(f"undeclared state {name!r}", lineno)
    out_rows = []
    for lineno, src, sym, dst, flag in rows:
        for s in (src, dst):
            if s not in declared:
                raise NfaSyntaxError(f"undeclared state {s!r}", lineno)
        if flag not in ("R", "I"):
            raise NfaSyntaxError(f"relevance must be R or I, got {flag!r}", lineno)
        try:
            m = parse_symbol(sym)
        except SymbolSyntaxError as e:
            raise NfaSyntaxError(str(e), lineno) from None
        out_rows.append(Row(src, m, dst, flag == "R"))
    return FiniteNfa(tuple(states), initial[0], frozenset(a for a, _ in accepting), tuple(out_rows))


def _strip_comment(line: str) -> str:
    # '#' opens a comment at the start of a line or after whitespace
    for i, c in enumerate(line):
        if c == "#" and (i == 0 or line[i - 1] in " \t"):
            return line[:i]
    return line


def serialize_nfa(nfa: FiniteNfa) -> str:
    lines = [
        "states: " + " ".join(nfa.states),
        f"initial: {nfa.initial}",
        "accepting: " + " ".join(s for s in nfa.states if s in nfa.accepting),
    ]
    for r in nfa.rows:
        lines.append(f"trans: {r.src} {r.matcher.to_token()} {r.dst} {'R' if r.relevant else 'I'}")
    return "\n".join(lines) + "\n"


class HasNextState(NamedTuple):
    kind: str  # "start" | "invalid" | "valid" | "error"
    value: Any = None

    def __str__(self):
        return self.kind if self.value is None else f"{self.kind}({self.value})"


START = HasNextState("start")
ERROR = HasNextState("error")
RV_EVENTS = ("iter", "hasNext", "next", "other")


class HasNextNfa:
    """Configuration graph of "no next() without a preceding hasNext()".

    States are ``start``, ``invalid(k)``, ``valid(k)`` and ``error`` for
    every object value ``k``; transitions are produced per event, so the
    infinite graph is never built.
    """

    initial = START

    def is_accepting(self, state) -> bool:
        return state.kind == "error"

    def transitions(self, state, event) -> List[Tuple[HasNextState, bool]]:
        name, k = event.symbol, event.value
        kind = state.kind
        if kind == "start":
            if name == "iter":
                return [(START, False), (HasNextState("invalid", k), True)]
            return [(START, False)]
        if kind == "error":
            return [(ERROR, False)]
        if k != state.value:
            return [(state, False)]
        if kind == "invalid":
            if name == "next":
                return [(ERROR, True)]
            if name == "hasNext":
                return [(HasNextState("valid", k), True)]
            return [(state, False)]
        # valid
        if name == "next":
            return [(HasNextState("invalid", k), True)]
        return [(state, False)]


def hasnext_nfa() -> HasNextNfa:
    return HasNextNfa()


BUILTINS = ("fig1b", "fig5", "hasnext")


def builtin(name: str):
    """``fig1b`` (the a/b/c example), ``fig5`` (ten non-space characters
    starting and ending with ``a``) or ``hasnext``."""
    if name == "hasnext":
        return hasnext_nfa()
    if name in ("fig1b", "fig5"):
        text = resources.files("treebuffer").joinpath("data", f"{name}.nfa").read_text(encoding="utf-8")
        return parse_nfa(text)
    raise ValueError(f"unknown builtin automaton {name!r}; expected one of {', '.join(BUILTINS)}")


def search(pattern: str, text: str, h: int, algorithm: str = "realtime"):
    """Report, for every position where a match ends, the last ``h`` group starts."""
    return Monitor(compile_regex(pattern), h, algorithm).run(text_events(text))


def parse_rv_trace(lines: Iterable[str]) -> List[Event]:
    """Read JSON Lines ``{"event": ..., "value": ..., "loc": ...}`` into events."""
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            name = obj["event"]
            value = int(obj["value"])
        except (ValueError, KeyError, TypeError) as e:
            raise ValueError(f"line {lineno}: bad trace record ({e})") from None
        if name not in RV_EVENTS:
            raise ValueError(f"line {lineno}: unknown event {name!r}")
        out.append(Event(name, value, obj.get("loc", lineno - 1)))
    return out


def format_rv_trace(events: Iterable[Event]) -> str:
    return "".join(
        json.dumps({"event": e.symbol, "value": e.value, "loc": e.location}) + "\n" for e in events
    )
