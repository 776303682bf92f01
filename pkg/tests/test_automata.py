import random

import pytest
from hypothesis import given, settings, strategies as st

from treebuffer import Event, Monitor, compile_regex, search, text_events
from treebuffer.automata import (
    BUILTINS,
    ERROR,
    START,
    HasNextState,
    NfaSyntaxError,
    builtin,
    format_rv_trace,
    hasnext_nfa,
    parse_nfa,
    parse_rv_trace,
    serialize_nfa,
)
from treebuffer.oracle import brute_capture_starts
from treebuffer.regex import MAX_NESTING, RegexSyntaxError
from treebuffer.symbols import SymbolMatcher, SymbolSyntaxError, parse_symbol

from gen import random_nfa, random_pattern, random_word


def test_fig1b_shape():
    nfa = builtin("fig1b")
    assert nfa.states == ("1", "2", "3")
    assert len(nfa.rows) == 8
    assert nfa.initial == "1" and nfa.accepting == {"3"}
    assert nfa.transitions("1", Event("a")) == [("1", True), ("2", True)]
    assert nfa.transitions("3", Event("z")) == []


def test_builtins():
    for name in BUILTINS:
        assert builtin(name) is not None
    with pytest.raises(ValueError):
        builtin("fig9")


def test_parse_errors_name_the_line():
    with pytest.raises(NfaSyntaxError) as e:
        parse_nfa("states: 1 2\ninitial: 1\ntrans: 1 a 3 R\n")
    assert e.value.line == 3
    for bad in ("states: 1\n", "states: 1\ninitial: 1\ntrans: 1 a 1 X\n", "states: 1\ninitial: 1\nfoo: 1\n",
                "states: 1\ninitial: 1\ntrans: 1 [a 1 R\n", "states: 1\ninitial: 2\n"):
        with pytest.raises(NfaSyntaxError):
            parse_nfa(bad)


def test_empty_accepting_set_never_reports():
    nfa = parse_nfa("states: 1\ninitial: 1\ntrans: 1 . 1 R\n")
    assert Monitor(nfa, 2).run(text_events("abc")) == []


def test_comments_and_symbols():
    nfa = parse_nfa("states: a b  # two\ninitial: a\naccepting: b\ntrans: a _ b R\ntrans: a [^_x] a I\ntrans: a \\# b I\n")
    assert nfa.transitions("a", Event(" ")) == [("b", True)]
    assert nfa.transitions("a", Event("y")) == [("a", False)]
    assert nfa.transitions("a", Event("#")) == [("a", False), ("b", False)]
    assert nfa.transitions("a", Event("x")) == []


@pytest.mark.parametrize("tok,yes,no", [(".", "x ", ""), ("_", " ", "_"), ("[a-c]", "abc", "d"),
                                        ("[^_]", "a_", " "), ("\\n", "\n", "n"), ("[\\]]", "]", "a")])
def test_symbols(tok, yes, no):
    m = parse_symbol(tok)
    assert all(m.matches(c) for c in yes)
    assert not any(m.matches(c) for c in no)
    assert parse_symbol(m.to_token()) == m


@pytest.mark.parametrize("tok", ["ab", "[ab", "[z-a]", "\\q", "[a]b"])
def test_bad_symbols(tok):
    with pytest.raises(SymbolSyntaxError):
        parse_symbol(tok)


def test_serialize_round_trip_builtins():
    for name in ("fig1b", "fig5"):
        nfa = builtin(name)
        assert parse_nfa(serialize_nfa(nfa)) == nfa


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_serialize_round_trip_random(seed):
    rng = random.Random(seed)
    nfa = random_nfa(rng, alphabet="ab _#.[]\\")
    assert parse_nfa(serialize_nfa(nfa)) == nfa


def test_serialize_classes():
    nfa = compile_regex("[^ a]x[-_]")
    assert parse_nfa(serialize_nfa(nfa)) == nfa


def test_regex_example():
    reports = search("a(b)*c", "abbc", 5)
    assert [(r.position, r.locations) for r in reports] == [(3, (1, 2))]


def test_regex_without_groups_reports_empty_traces():
    reports = search("ab", "xabab", 3)
    assert [(r.position, r.trace) for r in reports] == [(2, ()), (4, ())]
    assert not any(row.relevant for row in compile_regex("a*b").rows)


def test_regex_initial_loop_is_irrelevant():
    nfa = compile_regex("(a)")
    loop = nfa.rows[0]
    assert (loop.src, loop.dst, loop.relevant, loop.matcher) == ("0", "0", False, SymbolMatcher.wildcard())


def test_ford():
    pattern = "Ford( [A-Z][a-z]*){1,3} Ford"
    reports = search(pattern, "Ford Madox Ford", 3)
    assert [(r.position, r.locations) for r in reports] == [(14, (4,))]
    text = "Ford Madox Ford Hueffer Ford"
    got = {r.position: r.locations for r in search(pattern, text, 3)}
    brute = brute_capture_starts(pattern, text, 3)
    assert set(got) == set(brute) == {14, 27}
    assert all(got[p] in brute[p] for p in got)


@pytest.mark.parametrize(
    "pattern,pos",
    [("a(", 1), ("a)", 1), ("*a", 0), ("a**", 2), ("a{2", 1), ("a{3,1}", 1), ("[ab", 0), ("^a", 0), ("a\\", 1)],
)
def test_regex_syntax_errors(pattern, pos):
    with pytest.raises(RegexSyntaxError) as e:
        compile_regex(pattern)
    assert e.value.pos == pos


def test_regex_nesting_limit():
    compile_regex("(" * MAX_NESTING + "a" + ")" * MAX_NESTING)
    with pytest.raises(RegexSyntaxError, match="nesting"):
        compile_regex("(" * (MAX_NESTING + 1) + "a" + ")" * (MAX_NESTING + 1))


def test_regex_long_concatenation():
    text = "ab" * 2000
    assert len(search("(ab)" * 1500, text, 2)) > 0


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32), h=st.integers(1, 4))
def test_regex_against_brute_force(seed, h):
    rng = random.Random(seed)
    pattern = random_pattern(rng, 2)
    text = random_word(rng, 20)
    reports = search(pattern, text, h)
    brute = brute_capture_starts(pattern, text, h)
    assert {r.position for r in reports} == set(brute)
    for r in reports:
        assert r.locations in brute[r.position]


def test_hasnext_transitions():
    nfa = hasnext_nfa()
    inv, val = HasNextState("invalid", 1), HasNextState("valid", 1)
    assert nfa.transitions(START, Event("iter", 1)) == [(START, False), (inv, True)]
    assert nfa.transitions(inv, Event("next", 1)) == [(ERROR, True)]
    assert nfa.transitions(inv, Event("hasNext", 1)) == [(val, True)]
    assert nfa.transitions(val, Event("next", 1)) == [(inv, True)]
    assert nfa.transitions(val, Event("hasNext", 1)) == [(val, False)]
    assert nfa.transitions(inv, Event("next", 2)) == [(inv, False)]
    assert nfa.transitions(ERROR, Event("other", 5)) == [(ERROR, False)]
    assert str(inv) == "invalid(1)"


def test_rv_trace_round_trip():
    events = [Event("iter", 1, "A.java:3"), Event("next", 1, "A.java:4")]
    assert parse_rv_trace(format_rv_trace(events).splitlines()) == events
    assert parse_rv_trace(['{"event":"next","value":7}']) == [Event("next", 7, 0)]
    for bad in ['{"event":"jump","value":1}', '{"value":1}', "not json"]:
        with pytest.raises(ValueError):
            parse_rv_trace([bad])
