import pytest

from treebuffer import ALGORITHMS, InvalidParameterError, InvalidSequenceError, create
from treebuffer.buffer import bucket_bounds, bucket_of


@pytest.fixture(params=ALGORITHMS)
def algo(request):
    return request.param


def fig2_buffer(algo, h=3):
    b = create(h, algo)
    ini = b.initialize("ini")
    a1 = b.add_child(ini, "a1")
    a2 = b.add_child(ini, "a2")
    b3 = b.add_child(a2, "b3")
    return b, dict(ini=ini, a1=a1, a2=a2, b3=b3)


def names(hist):
    return [p for _, p in hist]


def test_history_oldest_first(algo):
    b, n = fig2_buffer(algo)
    assert names(b.history(n["b3"])) == ["ini", "a2", "b3"]


def test_history_truncates_at_h(algo):
    b, n = fig2_buffer(algo, h=2)
    assert names(b.history(n["b3"])) == ["a2", "b3"]


def test_history_stops_at_root(algo):
    b, n = fig2_buffer(algo, h=8)
    assert names(b.history(n["a1"])) == ["ini", "a1"]
    assert names(b.history(n["ini"])) == ["ini"]


def test_history_of_inactive_node_fails(algo):
    b, n = fig2_buffer(algo)
    b.deactivate(n["a1"])
    with pytest.raises(InvalidSequenceError):
        b.history(n["a1"])


def test_double_deactivate_fails(algo):
    b, n = fig2_buffer(algo)
    b.deactivate(n["a1"])
    with pytest.raises(InvalidSequenceError):
        b.deactivate(n["a1"])


def test_add_under_inactive_fails(algo):
    b, n = fig2_buffer(algo)
    b.deactivate(n["ini"])
    with pytest.raises(InvalidSequenceError):
        b.add_child(n["ini"], "x")


def test_operations_before_initialize_fail(algo):
    b = create(2, algo)
    with pytest.raises(InvalidSequenceError):
        b.add_child(0, "x")


def test_second_initialize_fails(algo):
    b, _ = fig2_buffer(algo)
    with pytest.raises(InvalidSequenceError):
        b.initialize("again")


def test_unknown_handle_fails(algo):
    b, _ = fig2_buffer(algo)
    with pytest.raises(InvalidSequenceError, match="unknown or was reclaimed"):
        b.history(12345)


def test_failed_operation_changes_nothing(algo):
    b, n = fig2_buffer(algo)
    before = (b.stats(), sorted(b.nodes()))
    with pytest.raises(InvalidSequenceError):
        b.deactivate(999)
    assert (b.stats(), sorted(b.nodes())) == before


@pytest.mark.parametrize("h", [0, -1, 1.5, True, "3"])
def test_bad_h_rejected(h):
    with pytest.raises(InvalidParameterError):
        create(h, "naive")


def test_unknown_algorithm_rejected():
    with pytest.raises(InvalidParameterError, match="unknown algorithm"):
        create(3, "fancy")


def test_expand_returns_children_and_deactivates(algo):
    b = create(2, algo)
    r = b.initialize("r")
    kids = b.expand(r, ["x", "y"])
    assert [b.payload(k) for k in kids] == ["x", "y"]
    assert not b.is_active(r)
    assert names(b.history(kids[1])) == ["r", "y"]


def test_expand_with_no_children_just_deactivates(algo):
    b = create(2, algo)
    r = b.initialize("r")
    x = b.add_child(r, "x")
    assert b.expand(r, []) == []
    assert b.active_nodes() == [x]


def test_naive_keeps_everything():
    b, _ = fig2_buffer("naive")
    for x in list(b.active_nodes()):
        b.deactivate(x)
    assert len(b) == 4


def test_metrics_count_operations(algo):
    b, n = fig2_buffer(algo)
    b.history(n["b3"])
    s = b.stats()
    assert s.op_count == 5
    assert s.total_refs > 0
    assert s.max_op_refs >= s.last_op_refs
    assert sum(s.histogram.values()) == s.op_count
    assert s.avg_refs_per_op == pytest.approx(s.total_refs / 5)
    assert s.peak_nodes >= s.cur_nodes == len(b)


def test_stats_is_a_snapshot(algo):
    b, n = fig2_buffer(algo)
    s = b.stats()
    b.history(n["b3"])
    assert s.op_count == 4


def test_record_log(algo):
    b = create(2, algo, record=True)
    r = b.initialize()
    x = b.add_child(r)
    b.deactivate(r)
    b.history(x)
    assert b.log == [("init", r), ("add", r, x), ("deact", r), ("hist", x)]


@pytest.mark.parametrize("refs,lo,hi", [(0, 0, 0), (1, 1, 1), (2, 2, 3), (3, 2, 3), (7, 4, 7), (8, 8, 15)])
def test_histogram_buckets(refs, lo, hi):
    assert bucket_of(refs) == lo
    assert bucket_bounds(lo) == (lo, hi)
