"""Dataset generators and the benchmark runner."""

from __future__ import annotations

import csv
import dataclasses
import os
import random
from typing import Dict, List, Optional, Tuple

from .automata import builtin, hasnext_nfa
from .buffer import bucket_bounds, create
from .monitor import Event, Monitor, text_events
from .oplog import Op, Replayer, op
from .oracle import FullTree, needed_set, primitive_ops

DATASETS = ("chain", "adversarial", "regex", "rv")
ORACLE_LIMIT = 10**4

CSV_HEADER = [
    "dataset", "algorithm", "h", "ops", "total_refs", "avg_refs_per_op",
    "max_refs_per_op", "peak_nodes", "final_nodes", "optimal_peak_nodes",
]
HIST_HEADER = ["dataset", "algorithm", "h", "bucket_lo", "bucket_hi", "count"]


def gen_chain(n: int) -> List[Op]:
    """init 0, expand 0 1, ..., expand n-1 n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return [op("init", 0)] + [op("expand", i - 1, i) for i in range(1, n + 1)]


def gen_adversarial(k: int) -> List[Op]:
    """Node 0 stays active while k (add, add, deact) triples pile up below it."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ops = [op("init", 0)]
    for i in range(k):
        a, b = 2 * i + 1, 2 * i + 2
        ops += [op("add", 0, a), op("add", 0, b), op("deact", b)]
    return ops


def gen_text(nbytes: int, seed: int = 0) -> str:
    """Pseudo-random words over a-z separated by single spaces.

    Word lengths center on 10 and ``a`` is over-represented so that ten
    non-space characters starting and ending with ``a`` occur regularly.
    """
    rng = random.Random(seed)
    letters = "abcdefghijklmnopqrstuvwxyz"
    weights = [6 if c == "a" else 1 for c in letters]
    parts = []
    size = 0
    while size <= nbytes:  # joined text has one space fewer than counted
        w = max(1, min(20, int(rng.gauss(10, 3))))
        word = "".join(rng.choices(letters, weights, k=w))
        parts.append(word)
        size += w + 1
    return " ".join(parts)[:nbytes]


def gen_iter_trace(iterators: int, events_per_iter: int, bug_rate: float, seed: int = 0
                   ) -> Tuple[List[Event], List[int]]:
    """An interleaved trace over ``iterators`` iterator values.

    Each iterator is created once, then receives ``events_per_iter`` events.
    A ``next`` is normally preceded by its own ``hasNext``; with probability
    ``bug_rate`` that ``hasNext`` is dropped.  Returns the events and the
    positions of the unguarded ``next`` events.
    """
    rng = random.Random(seed)
    # per iterator: a queue of pending event names
    plans: Dict[int, List[str]] = {}
    for k in range(1, iterators + 1):
        plan = ["iter"]
        while len(plan) < events_per_iter + 1:
            r = rng.random()
            if r < 0.15:
                plan.append("other")
            elif rng.random() < bug_rate:
                plan.append("next!")
            else:
                plan += ["hasNext", "next"]
        plans[k] = plan[::-1]
    events: List[Event] = []
    bugs: List[int] = []
    live = list(plans)
    while live:
        k = rng.choice(live)
        name = plans[k].pop()
        if name == "next!":
            bugs.append(len(events))
            name = "next"
        events.append(Event(name, k, len(events)))
        if not plans[k]:
            live.remove(k)
    return events, bugs


@dataclasses.dataclass
class MetricsRow:
    dataset: str
    algorithm: str
    h: int
    ops: int
    total_refs: int
    avg_refs_per_op: float
    max_refs_per_op: int
    peak_nodes: int
    final_nodes: int
    optimal_peak_nodes: Optional[int] = None

    def as_list(self) -> list:
        row = dataclasses.astuple(self)
        return [("" if v is None else (f"{v:.4f}" if isinstance(v, float) else v)) for v in row]


def optimal_peak(log, h: int) -> int:
    """Running maximum of |H_{<h}| over a buffer's recorded operation log."""
    t = FullTree()
    best = 0
    ops = primitive_ops(Op(entry[0], tuple(entry[1:])) for entry in log)
    for o in ops:
        if o.kind == "hist":
            continue
        t.apply(o)
        best = max(best, len(needed_set(t, h)))
    return best


def run_bench(dataset: str, algorithm: str, h: int, n: int = 10**5, seed: int = 0,
              with_oracle: bool = False):
    """Run one benchmark cell; return (MetricsRow, histogram rows).

    ``n`` is the chain length, the number of adversarial triples, the text
    size in bytes, or the approximate number of trace events.
    """
    record = with_oracle
    if dataset in ("chain", "adversarial"):
        ops = gen_chain(n) if dataset == "chain" else gen_adversarial(n)
        buf = create(h, algorithm, record=record)
        r = Replayer(buf)
        for o in ops:
            r.apply(o)
    elif dataset == "regex":
        m = Monitor(builtin("fig5"), h, algorithm, record=record)
        m.run(text_events(gen_text(n, seed)))
        buf = m.buffer
    elif dataset == "rv":
        iters = max(1, n // 100)
        events, _ = gen_iter_trace(iters, max(1, n // iters), 0.01, seed)
        m = Monitor(hasnext_nfa(), h, algorithm, record=record)
        m.run(events)
        buf = m.buffer
    else:
        raise ValueError(f"unknown dataset {dataset!r}; expected one of {', '.join(DATASETS)}")
    s = buf.stats()
    opt = None
    if with_oracle and s.op_count <= ORACLE_LIMIT:
        opt = optimal_peak(buf.log, h)
    row = MetricsRow(dataset, algorithm, h, s.op_count, s.total_refs, s.avg_refs_per_op,
                     s.max_op_refs, s.peak_nodes, s.cur_nodes, opt)
    hist = [[dataset, algorithm, h, *bucket_bounds(lo), c] for lo, c in sorted(s.histogram.items())]
    return row, hist


def append_csv(path: str, header: List[str], rows: List[list]) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        if new:
            w.writerow(header)
        w.writerows(rows)
