"""Online monitor for nondeterministic automata that reports error traces.

The monitor keeps one ``(state, node)`` pair per reachable automaton state.
The node is the tree buffer node holding the most recent relevant
transition of some run reaching that state, so ``history(node)`` is the
tail of that run's relevant transitions.
"""

from __future__ import annotations

import dataclasses
from typing import Any, Iterable, List, Optional, Tuple

from .buffer import NodeId, create


@dataclasses.dataclass(frozen=True)
class Event:
    symbol: Any
    value: Any = None
    location: Any = None

    @property
    def label(self) -> str:
        if self.value is None:
            return str(self.symbol)
        return f"{self.symbol}({self.value})"


@dataclasses.dataclass(frozen=True)
class Step:
    """A relevant transition taken by a run, and where it was taken."""

    source: Any
    label: str
    target: Any
    location: Any = None

    def __str__(self):
        return f"{_token(self.source)}-{_token(self.label)}->{_token(self.target)}@{_token(self.location)}"


def _token(v) -> str:
    s = str(v)
    return s.replace(" ", "_").replace(";", "\\;") if s else "_"


@dataclasses.dataclass(frozen=True)
class ErrorReport:
    position: int
    state: Any
    trace: Tuple[Step, ...]

    @property
    def locations(self) -> Tuple[Any, ...]:
        return tuple(s.location for s in self.trace)

    def format(self) -> str:
        trace = ";".join(str(s) for s in self.trace)
        return f"pos={self.position} state={_token(self.state)} trace={trace}"

    __str__ = format


def text_events(text: str, offset: int = 0) -> List[Event]:
    """One event per character, located at its index."""
    return [Event(c, None, i) for i, c in enumerate(text, offset)]


class Monitor:
    """Simulates ``nfa`` over a stream, recording relevant transitions in a tree buffer.

    ``nfa`` needs ``initial``, ``is_accepting(state)`` and
    ``transitions(state, event)`` returning ``(target, relevant)`` pairs.
    When several transitions reach the same target in one step the first
    one wins.
    """

    def __init__(self, nfa, h: int, algorithm: str = "realtime", record: bool = False):
        self.nfa = nfa
        self.buffer = create(h, algorithm, record=record)
        self._root_payload = Step(None, "", nfa.initial, None)
        root = self.buffer.initialize(self._root_payload)
        self.now: List[Tuple[Any, NodeId]] = [(nfa.initial, root)]
        self.position = 0

    @property
    def states(self) -> List[Any]:
        return [q for q, _ in self.now]

    def step(self, event: Event) -> List[ErrorReport]:
        nfa = self.nfa
        buf = self.buffer
        pos = self.position
        self.position += 1
        nxt = []
        in_states = set()
        in_nodes = set()
        reports = []
        for q, parent in self.now:
            for target, relevant in nfa.transitions(q, event):
                if target in in_states:
                    continue
                if relevant:
                    child = buf.add_child(parent, Step(q, event.label, target, event.location))
                else:
                    child = parent
                nxt.append((target, child))
                in_states.add(target)
                in_nodes.add(child)
                if nfa.is_accepting(target):
                    reports.append(ErrorReport(pos, target, self._trace(buf.history(child))))
        # a node shared by several pairs must be deactivated only once
        for _, node in self.now:
            if node not in in_nodes:
                buf.deactivate(node)
                in_nodes.add(node)
        self.now = nxt
        return reports

    def run(self, events: Iterable[Event]) -> List[ErrorReport]:
        reports = []
        for e in events:
            reports.extend(self.step(e))
        return reports

    def _trace(self, hist) -> Tuple[Step, ...]:
        return tuple(p for _, p in hist if p is not self._root_payload)


def run_stream(nfa, events: Iterable[Event], h: int, algorithm: str = "realtime") -> List[ErrorReport]:
    return Monitor(nfa, h, algorithm).run(events)
