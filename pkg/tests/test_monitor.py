import random

from hypothesis import given, settings, strategies as st

from treebuffer import ALGORITHMS, Event, Monitor, Step, run_stream, text_events
from treebuffer.automata import builtin, hasnext_nfa
from treebuffer.monitor import ErrorReport
from treebuffer.oracle import reachable_sets, trace_table

from gen import random_nfa, random_word


def test_new_monitor_has_initial_pair():
    m = Monitor(builtin("fig1b"), 3)
    assert m.states == ["1"]
    assert m.buffer.stats().op_count == 1


def test_fig2_run():
    reports = run_stream(builtin("fig1b"), text_events("cab"), 3)
    assert len(reports) == 1
    r = reports[0]
    assert r.position == 2 and r.state == "3"
    assert r.trace == (Step("1", "a", "2", 1), Step("2", "b", "3", 2))
    assert r.format() == "pos=2 state=3 trace=1-a->2@1;2-b->3@2"


def test_cabbcab():
    reports = run_stream(builtin("fig1b"), text_events("cabbcab"), 3)
    assert [r.position for r in reports] == [2, 3, 4, 5, 6]
    assert reports[-1].trace == (Step("1", "a", "1", 1), Step("1", "a", "2", 5), Step("2", "b", "3", 6))


def test_h1_traces_have_length_one():
    for r in run_stream(builtin("fig1b"), text_events("cabbcab"), 1):
        assert len(r.trace) <= 1


def test_empty_stream():
    assert run_stream(builtin("fig1b"), [], 3) == []


def test_dead_frontier_is_absorbing():
    m = Monitor(builtin("fig5"), 2)
    m.now = []
    assert m.run(text_events("aaaa")) == []


def test_symbol_outside_alphabet_kills_runs():
    m = Monitor(builtin("fig1b"), 3)
    assert m.step(Event("z")) == []
    assert m.now == []
    assert m.buffer.active_nodes() == []
    assert m.run(text_events("cab")) == []


def test_fig5_report_at_last_char():
    reports = run_stream(builtin("fig5"), text_events("axxxxxxxxa"), 4)
    assert [r.position for r in reports] == [9]
    assert run_stream(builtin("fig5"), text_events("ab"), 4) == []
    assert run_stream(builtin("fig5"), text_events("axxx xxxxa"), 4) == []


def test_hasnext_examples():
    E = Event
    nfa = hasnext_nfa()
    r = run_stream(nfa, [E("iter", 1, "L1"), E("next", 1, "L2")], 5)
    assert [x.position for x in r] == [1]
    assert [str(s) for s in r[0].trace] == ["start-iter(1)->invalid(1)@L1", "invalid(1)-next(1)->error@L2"]
    assert run_stream(nfa, [E("iter", 1), E("hasNext", 1), E("next", 1)], 5) == []
    r = run_stream(nfa, [E("iter", 1, 0), E("hasNext", 2, 1), E("next", 1, 2)], 5)
    assert [x.position for x in r] == [2]


def test_report_format_escapes():
    r = ErrorReport(3, "q x", (Step("a", "b;c", "d", 1),))
    assert r.format() == r"pos=3 state=q_x trace=a-b\;c->d@1"


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32), h=st.integers(1, 4), algo=st.sampled_from(ALGORITHMS))
def test_reports_match_reachability(seed, h, algo):
    rng = random.Random(seed)
    nfa = random_nfa(rng)
    word = text_events(random_word(rng))
    m = Monitor(nfa, h, algo)
    reach = reachable_sets(nfa, word)
    table = trace_table(nfa, word, h)
    for pos, e in enumerate(word):
        got = m.step(e)
        assert len(m.now) <= len(reach[pos])
        assert {r.state for r in got} == {q for q in reach[pos] if nfa.is_accepting(q)}
        for r in got:
            assert r.trace in table[pos][r.state]
