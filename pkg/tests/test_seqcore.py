import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spreadlogic.seqcore import (
    FinSeq,
    StrictIncSeq,
    decode,
    encode,
    first,
    is_prefix,
    is_strict_prefix,
    pair,
    second,
    seq_concat,
    unpair,
)


def test_pair_round_trips():
    assert unpair(pair(0, 0)) == (0, 0)
    assert unpair(pair(7, 3)) == (7, 3)
    for m in range(64):
        for n in range(64):
            c = pair(m, n)
            assert unpair(c) == (m, n), (m, n, c)
            assert (first(c), second(c)) == (m, n), c


def test_pair_injective_on_grid():
    seen = {}
    for m in range(64):
        for n in range(64):
            c = pair(m, n)
            assert c not in seen, (seen.get(c), (m, n))
            seen[c] = (m, n)


def test_pair_surjective_on_initial_segment():
    # every code below the grid's minimum edge is hit
    codes = {pair(m, n) for m in range(64) for n in range(64)}
    for c in range(2016):
        assert c in codes, c


def test_encode_base_cases():
    assert encode(()) == 0
    assert decode(0) == ()
    assert encode((0,)) == 1
    assert decode(1) == (0,)


def test_encode_decode_round_trip_small():
    for length in range(7):
        for items in itertools.product(range(7), repeat=length):
            code = encode(items)
            assert decode(code) == items, (items, code)


def test_encode_injective_small():
    seen = {}
    for length in range(5):
        for items in itertools.product(range(5), repeat=length):
            code = encode(items)
            assert code not in seen, (seen.get(code), items)
            seen[code] = items


@given(st.lists(st.integers(min_value=0, max_value=10**6), max_size=8))
def test_encode_decode_round_trip_random(items):
    assert decode(encode(items)) == tuple(items)


def test_finseq_lookup_past_end_is_zero():
    s = FinSeq((5, 1))
    assert s(0) == 5
    assert s(1) == 1
    assert s(2) == 0
    assert s(100) == 0
    assert len(s) == 2


def test_finseq_code_matches_encode():
    s = FinSeq((0, 1, 1))
    assert s.code == encode((0, 1, 1)), s.code
    assert FinSeq.from_code(s.code).items == (0, 1, 1)
    assert len(decode(s.code)) == len(s)


def test_finseq_rejects_negative_entries():
    with pytest.raises(ValueError):
        FinSeq((1, -1))


def test_concat_identity_and_definition():
    assert seq_concat(FinSeq(()), FinSeq((1, 2))).items == (1, 2)
    assert seq_concat(FinSeq((0, 1)), FinSeq((1,))).items == (0, 1, 1)


def test_concat_makes_prefix():
    pool = [
        FinSeq(items)
        for length in range(5)
        for items in itertools.product(range(4), repeat=length)
    ]
    for s in pool:
        for t in pool:
            u = seq_concat(s, t)
            assert len(u) == len(s) + len(t)
            assert is_prefix(s, u), (s.items, t.items)


def _prefix_by_search(s: FinSeq, t: FinSeq) -> bool:
    # literal definition: some u concatenates s up to t
    if len(s) > len(t):
        return False
    gap = len(t) - len(s)
    alphabet = range(max(list(t) + [0]) + 1)
    return any(
        seq_concat(s, FinSeq(u)).items == t.items
        for u in itertools.product(alphabet, repeat=gap)
    )


def test_prefix_agrees_with_search_definition():
    pool = [
        FinSeq(items)
        for length in range(4)
        for items in itertools.product(range(3), repeat=length)
    ]
    for s in pool:
        for t in pool:
            assert is_prefix(s, t) == _prefix_by_search(s, t), (s.items, t.items)
            assert is_strict_prefix(s, t) == (
                is_prefix(s, t) and s.items != t.items
            ), (s.items, t.items)


def test_prefix_is_partial_order():
    assert is_prefix(FinSeq(()), FinSeq((9, 9, 9)))
    assert is_prefix(FinSeq((0, 1)), FinSeq((0, 1, 1)))
    assert is_strict_prefix(FinSeq((0, 1)), FinSeq((0, 1, 1)))
    pool = [
        FinSeq(items)
        for length in range(4)
        for items in itertools.product(range(3), repeat=length)
    ]
    for s in pool:
        assert is_prefix(s, s)
        assert not is_strict_prefix(s, s), s.items
    for s in pool:
        for t in pool:
            if is_prefix(s, t) and is_prefix(t, s):
                assert s.items == t.items, (s.items, t.items)


def test_strict_inc_values():
    z = StrictIncSeq((2, 3), (2, 3))
    assert [z.value_at(i) for i in range(6)] == [2, 3, 5, 8, 10, 13]
    assert z(4) == 10
    d = StrictIncSeq((2,), (1,))
    assert [d(i) for i in range(5)] == [2, 3, 4, 5, 6]


def test_strict_inc_is_strictly_increasing():
    for values, incs in [
        ((0,), (1,)),
        ((2, 3), (2, 3)),
        ((1, 4, 9), (5,)),
        ((2,), (1, 1, 7)),
    ]:
        z = StrictIncSeq(values, incs)
        for i in range(50):
            assert z(i) < z(i + 1), (values, incs, i)


def test_strict_inc_first_value_at_least():
    z = StrictIncSeq((2, 3), (2, 3))
    # values run 2,3,5,8,10,13,...
    assert z.first_value_at_least(0) == 0
    assert z.first_value_at_least(3) == 1
    assert z.first_value_at_least(9) == 4
    assert z.first_value_at_least(14) == 6
    for bound in range(40):
        i = z.first_value_at_least(bound)
        assert z(i) >= bound, (bound, i)
        assert i == 0 or z(i - 1) < bound, (bound, i)


def test_strict_inc_validation():
    with pytest.raises(ValueError):
        StrictIncSeq(())
    with pytest.raises(ValueError):
        StrictIncSeq((3, 3))
    with pytest.raises(ValueError):
        StrictIncSeq((1, 2), (0,))
    with pytest.raises(ValueError):
        StrictIncSeq((-1, 2))


def test_strict_inc_json_round_trip():
    z = StrictIncSeq((2, 5), (1, 3))
    obj = z.to_json()
    assert obj == {"values": [2, 5], "period_increments": [1, 3]}
    back = StrictIncSeq.from_json(obj)
    assert back == z
    assert StrictIncSeq.from_json({"values": [4]}) == StrictIncSeq((4,), (1,))
