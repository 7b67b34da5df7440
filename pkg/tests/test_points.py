import itertools

from hypothesis import given
from hypothesis import strategies as st

from spreadlogic.points import ZERO, Point, difference_positions, eventually_equal, first_difference
from spreadlogic.seqcore import FinSeq

values = st.integers(min_value=0, max_value=3)
points = st.builds(
    Point,
    st.lists(values, max_size=4).map(tuple),
    st.lists(values, min_size=1, max_size=4).map(tuple),
)


def test_canonical_forms_are_equal():
    # same stream, different presentations
    assert Point((0,), (1, 0)) == Point((0, 1), (0, 1))
    assert Point((), (2, 2)) == Point((), (2,))
    assert Point((3,), (3,)) == Point((), (3,))
    assert Point((1, 2), (5, 5, 5)) == Point((1, 2), (5,))


@given(points, st.integers(min_value=0, max_value=40))
def test_canonicalization_preserves_the_stream(p, n):
    raw_pre, raw_period = p.pre, p.period
    raw = lambda i: raw_pre[i] if i < len(raw_pre) else raw_period[(i - len(raw_pre)) % len(raw_period)]
    assert p.at(n) == raw(n), (p, n)


@given(points)
def test_canonical_form_is_minimal(p):
    # no shorter presentation of the same stream exists
    for pre_len in range(len(p.pre)):
        q = Point(p.pre[:pre_len], p.pre[pre_len:] + p.period)
        if all(q.at(i) == p.at(i) for i in range(len(p.pre) + 3 * len(p.period) + 3)):
            assert False, (p, q)


def test_constant_and_zero():
    assert ZERO == Point((), (0,))
    assert Point.constant(4).at(1000) == 4
    assert ZERO.max_value() == 0


def test_bar_and_call():
    p = Point((0, 2), (1, 3))
    assert p.bar(0) == FinSeq(())
    assert p.bar(5).items == (0, 2, 1, 3, 1)
    assert [p(i) for i in range(6)] == [0, 2, 1, 3, 1, 3]


@given(points, st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=30))
def test_shift_drops_initial_values(p, k, n):
    assert p.shift(k).at(n) == p.at(n + k)


@given(points, st.lists(values, max_size=4), st.integers(min_value=0, max_value=30))
def test_with_prefix_prepends(p, s, n):
    q = p.with_prefix(tuple(s))
    want = s[n] if n < len(s) else p.at(n - len(s))
    assert q.at(n) == want, (p, s, n)


@given(points, st.integers(min_value=0, max_value=30))
def test_succ_values_pointwise(p, n):
    assert p.succ_values().at(n) == p.at(n) + 1
    assert p.map_values(lambda v: 2 * v).at(n) == 2 * p.at(n)


@given(points, st.integers(min_value=0, max_value=10), values, st.integers(min_value=0, max_value=30))
def test_set_at_changes_one_position(p, i, v, n):
    q = p.set_at(i, v)
    assert q.at(n) == (v if n == i else p.at(n)), (p, i, v, n)


@given(points)
def test_max_value_is_attained_bound(p):
    window = [p.at(i) for i in range(len(p.pre) + len(p.period))]
    assert p.max_value() == max(window), p


def test_is_nondecreasing():
    assert Point((0, 1), (1,)).is_nondecreasing()
    assert Point((), (2,)).is_nondecreasing()
    assert not Point((1, 0), (1,)).is_nondecreasing()
    assert not Point((0,), (1, 2)).is_nondecreasing()  # period wraps 2 -> 1


@given(points, points)
def test_first_difference_is_exact(a, b):
    # brute scan over a window long enough to cover both cycles
    horizon = len(a.pre) + len(b.pre) + 2 * len(a.period) * len(b.period) + 4
    scan = next((i for i in range(horizon) if a.at(i) != b.at(i)), None)
    assert first_difference(a, b) == scan, (a, b)


@given(points, points)
def test_eventually_equal_matches_tail_scan(a, b):
    start = len(a.pre) + len(b.pre)
    cycle = len(a.period) * len(b.period)
    tail_same = all(a.at(start + i) == b.at(start + i) for i in range(2 * cycle + 1))
    assert eventually_equal(a, b) == tail_same, (a, b)


@given(points, st.lists(st.tuples(st.integers(min_value=0, max_value=8), values), max_size=4))
def test_eventually_equal_absorbs_finite_edits(p, edits):
    q = p
    for i, v in edits:
        q = q.set_at(i, v)
    assert eventually_equal(p, q), (p, edits)


@given(points, st.integers(min_value=0, max_value=6))
def test_shift_then_replay_prefix_is_identity(p, k):
    assert p.shift(k).with_prefix(p.bar(k)) == p


@given(points, points)
def test_difference_positions_lists_exactly_the_disagreements(a, b):
    got = difference_positions(a, b, 25)
    want = [i for i in range(25) if a.at(i) != b.at(i)]
    assert got == want, (a, b)


def test_eventually_equal_examples():
    assert eventually_equal(Point((7, 7, 7), (0,)), ZERO)
    assert not eventually_equal(Point((), (0, 1)), ZERO)
    assert first_difference(ZERO, ZERO) is None
    assert first_difference(Point((1,), (0,)), ZERO) == 0
    assert first_difference(Point((0, 0, 2), (0,)), ZERO) == 2
