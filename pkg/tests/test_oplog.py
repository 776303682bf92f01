import random

import pytest

from treebuffer import InvalidSequenceError, create
from treebuffer.oplog import (
    OpLogSyntaxError,
    format_oplog,
    is_extensive,
    op,
    parse_oplog,
    replay,
    validate_oplog,
)
from treebuffer.oracle import random_oplog

FIG2 = """
init ini      # root
add ini a1
add ini a2
add a2 b3
hist b3
"""


def test_parse_and_replay():
    ops = parse_oplog(FIG2)
    assert ops[0] == op("init", "ini")
    assert replay(create(3, "realtime"), ops) == [["ini", "a2", "b3"]]


def test_format_round_trip():
    ops = random_oplog(random.Random(3), 80)
    assert parse_oplog(format_oplog(ops)) == ops


@pytest.mark.parametrize("text,line", [("init 0\nfrob 1\n", 2), ("add 0\n", 1), ("\n\ninit\n", 3)])
def test_syntax_errors_name_the_line(text, line):
    with pytest.raises(OpLogSyntaxError) as e:
        parse_oplog(text)
    assert e.value.line == line


@pytest.mark.parametrize(
    "ops,index",
    [
        ([op("add", 0, 1)], 0),
        ([op("init", 0), op("init", 1)], 1),
        ([op("init", 0), op("deact", 0), op("hist", 0)], 2),
        ([op("init", 0), op("add", 0, 0)], 1),
        ([op("init", 0), op("expand", 0, 1, 1)], 1),
    ],
)
def test_invalid_sequences(ops, index):
    with pytest.raises(InvalidSequenceError) as e:
        validate_oplog(ops)
    assert e.value.index == index
    with pytest.raises(InvalidSequenceError) as e:
        replay(create(2, "gc"), ops)
    assert e.value.index == index


def test_is_extensive():
    assert is_extensive([op("init", 0), op("add", 0, 1), op("deact", 0), op("expand", 1, 2)])
    assert not is_extensive([op("init", 0), op("add", 0, 1), op("deact", 1)])
    assert not is_extensive([op("init", 0), op("expand", 0)])


def test_random_logs_are_valid():
    rng = random.Random(0)
    for i in range(100):
        ops = random_oplog(rng, 120, extensive=i % 2 == 0)
        validate_oplog(ops)
        if i % 2 == 0:
            assert is_extensive(ops)
