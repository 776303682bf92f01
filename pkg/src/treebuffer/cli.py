"""Command-line entry point: ``treebuffer <command> ...``.

Exit codes: 0 success, 1 usage error, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import List, Optional

from . import bench, oracle
from .automata import BUILTINS, HasNextNfa, builtin, compile_regex, hasnext_nfa, parse_nfa, parse_rv_trace
from .buffer import ALGORITHMS, InvalidSequenceError, create
from .monitor import Monitor, text_events
from .oplog import format_oplog, parse_oplog, replay


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treebuffer", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, h_default=10):
        sp.add_argument("--h", type=_positive, default=h_default, help="history depth")
        sp.add_argument("--algo", choices=ALGORITHMS, default="realtime")

    b = sub.add_parser("bench", help="run one benchmark cell")
    b.add_argument("dataset", choices=bench.DATASETS)
    common(b, 100)
    b.add_argument("--n", type=_positive, default=10**5,
                   help="chain length, adversarial triples, text bytes or trace events")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", help="append the metrics row to this CSV file")
    b.add_argument("--hist", help="append histogram rows to this CSV file")
    b.add_argument("--with-oracle", action="store_true",
                   help=f"fill optimal_peak_nodes (runs of at most {bench.ORACLE_LIMIT} ops)")

    s = sub.add_parser("search", help="regex search reporting capture-group start positions")
    s.add_argument("--pattern", required=True)
    s.add_argument("--text", required=True, help="text file, or '-' for stdin")
    common(s)

    r = sub.add_parser("rv", help="check the hasNext property on a JSON Lines trace")
    r.add_argument("--trace", required=True, help="trace file, or '-' for stdin")
    common(r)

    m = sub.add_parser("monitor", help="run an automaton over a character stream")
    m.add_argument("--automaton", required=True, help=f"automaton file or one of {', '.join(BUILTINS)}")
    m.add_argument("--input", required=True, help="input file, or '-' for stdin")
    common(m)

    rp = sub.add_parser("replay", help="replay an operation log, printing every history")
    rp.add_argument("--input", required=True, help="operation log file, or '-' for stdin")
    common(rp)

    oc = sub.add_parser("oracle-check", help="compare all algorithms against the oracle on random logs")
    oc.add_argument("--n", type=_positive, default=200, help="number of random logs")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--h", type=_positive, default=3)
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _strip_newline(text: str) -> str:
    return text[:-1] if text.endswith("\n") else text


def _load_automaton(name: str):
    if name in BUILTINS and not os.path.exists(name):
        return builtin(name)
    return parse_nfa(_read(name))


def _print_reports(reports, out) -> None:
    for rep in reports:
        out.write(rep.format() + "\n")


def cmd_bench(a, out) -> None:
    row, hist = bench.run_bench(a.dataset, a.algo, a.h, a.n, a.seed, a.with_oracle)
    if a.csv:
        bench.append_csv(a.csv, bench.CSV_HEADER, [row.as_list()])
    if a.hist:
        bench.append_csv(a.hist, bench.HIST_HEADER, hist)
    out.write(",".join(bench.CSV_HEADER) + "\n")
    out.write(",".join(str(v) for v in row.as_list()) + "\n")


def cmd_search(a, out) -> None:
    nfa = compile_regex(a.pattern)
    text = _strip_newline(_read(a.text))
    _print_reports(Monitor(nfa, a.h, a.algo).run(text_events(text)), out)


def cmd_rv(a, out) -> None:
    events = parse_rv_trace(_read(a.trace).splitlines())
    _print_reports(Monitor(hasnext_nfa(), a.h, a.algo).run(events), out)


def cmd_monitor(a, out) -> None:
    nfa = _load_automaton(a.automaton)
    if isinstance(nfa, HasNextNfa):
        events = parse_rv_trace(_read(a.input).splitlines())
    else:
        events = text_events(_strip_newline(_read(a.input)))
    _print_reports(Monitor(nfa, a.h, a.algo).run(events), out)


def cmd_replay(a, out) -> None:
    ops = parse_oplog(_read(a.input))
    for hist in replay(create(a.h, a.algo), ops):
        out.write(" ".join(hist) + "\n")


def cmd_oracle_check(a, out) -> int:
    rng = random.Random(a.seed)
    bad = 0
    for i in range(a.n):
        ops = oracle.random_oplog(rng, rng.randint(5, 200), extensive=rng.random() < 0.5)
        full = oracle.FullTree()
        expected = [r for o in ops if (r := full.apply(o, a.h)) is not None]
        for algo in ALGORITHMS:
            got = replay(create(a.h, algo), ops)
            if got != expected:
                bad += 1
                out.write(f"log {i}: {algo} differs from the oracle\n")
                out.write(format_oplog(ops))
    out.write(f"{a.n} logs, {bad} mismatches\n")
    return 1 if bad else 0


COMMANDS = {
    "bench": cmd_bench,
    "search": cmd_search,
    "rv": cmd_rv,
    "monitor": cmd_monitor,
    "replay": cmd_replay,
    "oracle-check": cmd_oracle_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    out = sys.stdout
    try:
        rc = COMMANDS[a.command](a, out)
    except (OSError, ValueError, InvalidSequenceError) as e:
        # covers NfaSyntaxError, RegexSyntaxError, OpLogSyntaxError and
        # InvalidParameterError, which are all ValueErrors
        print(f"treebuffer: error: {e}", file=sys.stderr)
        return 2
    out.flush()
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
