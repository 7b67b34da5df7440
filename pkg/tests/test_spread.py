import itertools
import math
import random

import pytest

from spreadlogic.errors import NotInjectiveToDepth, PreconditionFailed, RootRejected, SearchExhausted
from spreadlogic.points import ZERO, Point
from spreadlogic.seqcore import FinSeq
from spreadlogic.spread import (
    baire_law,
    cb_rank_profile,
    constant_law,
    count_depth_nodes,
    enumerate_decidable,
    is_fan_to_depth,
    leftmost_inhabitant,
    predicate_law,
    retract,
    subtree_rank_data,
    table_law,
    toy_accepts,
    toy_law,
    validate_spread_law,
)
from spreadlogic.toyspread import FiniteSum, Product, law_for

ALPHABET = (0, 1, 2)
UNIVERSE = [
    tuple(s) for length in range(6) for s in itertools.product(ALPHABET, repeat=length)
]


def _random_tables(count, seed, max_len=5):
    rng = random.Random(seed)
    pool = [s for s in UNIVERSE if len(s) <= max_len]
    for _ in range(count):
        k = rng.randint(1, 12)
        yield table_law(rng.sample(pool, k))


# validation


def test_validate_toy_law_clean():
    report = validate_spread_law(toy_law(2), depth=8, branch_bound=8)
    assert report.ok, report.to_json()
    assert report.childless == () and report.nonmonotone == ()


def test_validate_childless_root():
    report = validate_spread_law(table_law([()]), depth=4, branch_bound=3)
    assert not report.ok
    assert [tuple(s) for s in report.childless] == [()], report.childless


def test_validate_orphaned_accepted_code():
    # ⟨1,1⟩ listed but ⟨1⟩ missing: monotonicity broken at ⟨1⟩ and the
    # orphan itself is childless
    report = validate_spread_law(table_law([(), (1, 1)]), depth=4, branch_bound=2)
    assert {tuple(s) for s in report.childless} == {(), (1, 1)}, report.childless
    assert [(tuple(a), tuple(b)) for a, b in report.nonmonotone] == [((1,), (1, 1))]


def _brute_report(law, depth, bound):
    universe = [
        tuple(s)
        for length in range(depth + 1)
        for s in itertools.product(range(bound + 1), repeat=length)
    ]
    childless = {
        s
        for s in universe
        if law.accepts(s)
        and len(s) < depth
        and not any(law.accepts(s + (n,)) for n in range(bound + 1))
    }
    accepted = [s for s in universe if law.accepts(s)]
    nonmonotone = {
        s
        for s in universe
        if not law.accepts(s)
        and any(len(t) > len(s) and t[: len(s)] == s for t in accepted)
    }
    return childless, nonmonotone


def test_validate_agrees_with_brute_force_on_tables():
    for law in _random_tables(40, seed=417):
        report = validate_spread_law(law, depth=5, branch_bound=2)
        childless, nonmonotone = _brute_report(law, 5, 2)
        assert {tuple(s) for s in report.childless} == childless, law.accept_codes
        assert {tuple(s) for s, _ in report.nonmonotone} == nonmonotone, law.accept_codes
        # each witness is a listed accepted strict extension
        for s, t in report.nonmonotone:
            assert law.accepts(t) and len(t) > len(s)
            assert t.items[: len(s)] == s.items


def test_validate_opaque_predicate_matches_table_twin():
    for law in _random_tables(15, seed=93):
        codes = law.accept_codes
        twin = predicate_law(lambda s, c=codes: FinSeq(s).code in c)
        a = validate_spread_law(law, depth=4, branch_bound=2)
        b = validate_spread_law(twin, depth=4, branch_bound=2)
        assert b.exhaustive
        # the opaque scan reports reachable violations; on prefix-closed
        # tables the reports coincide outright
        if not a.nonmonotone:
            assert {tuple(s) for s in a.childless} == {tuple(s) for s in b.childless}
            assert b.nonmonotone == ()


# leftmost inhabitant


def test_leftmost_toy():
    assert leftmost_inhabitant(toy_law(2), 5).items == (0, 0, 0, 0, 0)


def test_leftmost_singleton_of_ones():
    law = table_law([(), (1,), (1, 1), (1, 1, 1)])
    assert leftmost_inhabitant(law, 3).items == (1, 1, 1)


def test_leftmost_errors():
    with pytest.raises(RootRejected):
        leftmost_inhabitant(table_law([(1,)]), 2)
    with pytest.raises(SearchExhausted):
        leftmost_inhabitant(table_law([()]), 2)


def test_leftmost_agrees_with_smallest_path():
    for law in _random_tables(40, seed=11):
        for length in range(1, 4):
            want = min(
                (
                    s
                    for s in UNIVERSE
                    if len(s) == length
                    and all(law.accepts(s[:k]) for k in range(length + 1))
                ),
                default=None,
            )
            if want is None:
                with pytest.raises((RootRejected, SearchExhausted)):
                    leftmost_inhabitant(law, length, branch_bound=2)
            else:
                got = leftmost_inhabitant(law, length, branch_bound=2)
                assert got.items == want, (law.accept_codes, length)


# retraction


def test_retract_fixes_members():
    assert retract(toy_law(2), ZERO, depth=6).items == (0,) * 6
    assert retract(toy_law(3), Point((0, 1), (2,)), depth=5).items == (0, 1, 2, 2, 2)


def test_retract_replaces_invalid_values():
    assert retract(toy_law(2), Point.constant(2), depth=4).items == (0, 0, 0, 0)


def test_retract_properties_on_random_points():
    rng = random.Random(5005)
    laws = [toy_law(2), toy_law(3), law_for(Product(2, 2)), law_for(FiniteSum((1, 2)))]
    for _ in range(60):
        law = rng.choice(laws)
        p = Point(
            tuple(rng.randint(0, 3) for _ in range(rng.randint(0, 3))),
            tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 2))),
        )
        deep = retract(law, p, depth=7)
        # accepted at every stage
        for k in range(8):
            assert law.accepts(deep.items[:k]), (p, deep.items)
        # coherent with the shallower run
        assert retract(law, p, depth=6).items == deep.items[:6]
        # fixpoint on members
        if all(law.accepts(p.bar(k).items) for k in range(8)):
            assert deep.items == p.bar(7).items, p
        # idempotent through the induced member
        back = Point(deep.items, (deep.items[-1],))
        if all(law.accepts(back.bar(k).items) for k in range(8)):
            assert retract(law, back, depth=7).items == deep.items, p


# fan check


def test_toy_spreads_are_fans():
    for n in range(1, 5):
        assert is_fan_to_depth(toy_law(n), 8, lambda s, n=n: n - 1), n


def test_baire_law_is_not_a_fan():
    assert not is_fan_to_depth(baire_law(), 3, lambda s: 3)


# rank profiles


def test_toy_rank_profiles_depth_10():
    want = {
        1: (0, {0: 1}),
        2: (1, {0: 11, 1: 1}),
        3: (2, {0: 66, 1: 10, 2: 1}),
        4: (3, {0: 286, 1: 55, 2: 9, 3: 1}),
    }
    for n, (rank, components) in want.items():
        profile = cb_rank_profile(toy_law(n), depth=10, branch_bound=9)
        assert profile.root_rank == rank, (n, profile.root_rank)
        assert profile.components == components, (n, profile.components)
        assert not profile.cap_reached


def test_singleton_rank():
    profile = cb_rank_profile(toy_law(1), depth=8, branch_bound=8)
    assert profile.root_rank == 0
    assert profile.components == {0: 1}, profile.components


def test_product_profiles_match_closed_form():
    for n in range(1, 5):
        for m in range(1, 5):
            profile = cb_rank_profile(law_for(Product(n, m)), depth=12, branch_bound=12)
            # n top components of rank m-1, nothing above
            assert profile.components.get(m - 1, 0) == n, (n, m, profile.components)
            assert all(k < m for k in profile.components), (n, m, profile.components)
            assert profile.root_rank == (m - 1 if n == 1 else m), (n, m)


def test_rank_monotone_in_depth():
    for n in range(1, 5):
        ranks = [
            cb_rank_profile(toy_law(n), depth=d, branch_bound=n).root_rank
            for d in range(2, 9)
        ]
        assert all(a <= b for a, b in zip(ranks, ranks[1:])), (n, ranks)


def test_rank_profile_shape_invariants():
    for law in [toy_law(3), law_for(Product(2, 2)), table_law([(), (0,), (0, 0)])]:
        profile = cb_rank_profile(law, depth=6, branch_bound=4, rank_cap=5)
        assert all(0 <= k <= 5 for k in profile.components), profile.components
        assert all(v >= 1 for v in profile.components.values()), profile.components


def test_keyed_and_unkeyed_rank_data_agree():
    # the suffix-key cache must be invisible in the results
    for n in range(5):
        keyed = toy_law(n)
        plain = predicate_law(lambda s, n=n: toy_accepts(n, s), hereditary=True)
        for depth in (3, 5, 7):
            a = subtree_rank_data(keyed, (), depth, 6, 8)
            b = subtree_rank_data(plain, (), depth, 6, 8)
            assert a == b, (n, depth, a, b)


# node counting


def test_count_depth_nodes_matches_enumeration():
    for n in range(1, 5):
        for depth in range(5):
            brute = sum(
                1
                for s in itertools.product(range(n), repeat=depth)
                if toy_accepts(n, s)
            )
            assert count_depth_nodes(toy_law(n), depth, branch_bound=n) == brute, (n, depth)
    # nondecreasing sequences count as a binomial
    assert count_depth_nodes(toy_law(3), 8, branch_bound=8) == math.comb(10, 2)


# enumeration of decidable spreads


def test_enumerate_three_isolated_points():
    law = law_for(FiniteSum((1, 1, 1)))
    code = [(FinSeq((0,)), 0), (FinSeq((1,)), 1), (FinSeq((2,)), 2)]
    points = enumerate_decidable(law, code, depth=6, branch_bound=3)
    assert points == [ZERO, Point((1,), (0,)), Point((2,), (0,))], points


def test_enumerate_singleton():
    assert enumerate_decidable(toy_law(1), [(FinSeq(()), 0)], depth=6) == [ZERO]


def test_enumerate_rejects_separating_prefix():
    with pytest.raises(NotInjectiveToDepth):
        enumerate_decidable(toy_law(2), [(FinSeq(()), 0)], depth=6)


def test_enumerate_rejects_duplicate_index():
    law = law_for(FiniteSum((1, 1)))
    with pytest.raises(NotInjectiveToDepth):
        enumerate_decidable(law, [(FinSeq((0,)), 0), (FinSeq((1,)), 0)], depth=6)


def test_enumerate_rejects_nested_prefixes():
    law = law_for(FiniteSum((1, 1)))
    with pytest.raises(NotInjectiveToDepth):
        enumerate_decidable(law, [(FinSeq((0,)), 0), (FinSeq((0, 0)), 1)], depth=6)


def test_enumerate_rejects_rejected_prefix():
    with pytest.raises(PreconditionFailed):
        enumerate_decidable(toy_law(1), [(FinSeq((7,)), 0)], depth=6)


def test_enumerate_covers_leaves_of_a_finite_fan():
    branches = [(0, 0, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0)]
    law = table_law([b[:k] for b in branches for k in range(7)])
    code = [(FinSeq((0,)), 0), (FinSeq((1, 0)), 1), (FinSeq((1, 1)), 2)]
    points = enumerate_decidable(law, code, depth=6, branch_bound=2)
    got = {p.bar(6).items for p in points}
    leaves = {
        s for s in itertools.product(range(3), repeat=6) if law.accepts(s)
    }
    assert got == leaves == set(branches), (got, leaves)
