import pytest

from spreadlogic.eqlogic.formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Tag,
    alpha_equivalent,
    big_and,
    big_or,
    d_expansion,
    expand,
    format_formula,
    free_vars,
    make_tag,
    quantifier_rank,
    recognize,
)


def _has_tag(f):
    if isinstance(f, Tag):
        return True
    if isinstance(f, (Not, Exists, Forall)):
        return _has_tag(getattr(f, "sub", None) or f.body)
    if isinstance(f, (And, Or, Implies)):
        return _has_tag(f.left) or _has_tag(f.right)
    return False


# structure


def test_free_vars():
    assert free_vars(Eq("x", "y")) == {"x", "y"}
    assert free_vars(Forall("y", Eq("x", "y"))) == {"x"}
    assert free_vars(make_tag("D_m", (1,), ("x",))) == {"x"}
    assert free_vars(make_tag("psi", (2,))) == frozenset()
    assert free_vars(make_tag("AP", (), ("a", "b"))) == {"a", "b"}


def test_quantifier_rank():
    assert quantifier_rank(Eq("x", "y")) == 0
    assert quantifier_rank(make_tag("D", (), ("x",))) == 1
    assert quantifier_rank(make_tag("AP", (), ("x", "y"))) == 1
    assert quantifier_rank(make_tag("dec_eq")) == 2
    # one-parameter families: m more rounds of pruning, one binder each
    assert quantifier_rank(make_tag("psi", (0,))) == 2
    assert quantifier_rank(make_tag("psi", (2,))) == 4
    assert quantifier_rank(make_tag("rho", (2,))) == 5
    for m in range(4):
        assert quantifier_rank(make_tag("psi", (m,))) == m + 2
        assert quantifier_rank(make_tag("rho", (m,))) == m + 3
    # two-parameter families and the cardinality sentences
    for p in (1, 2):
        for q in (1, 2):
            assert quantifier_rank(make_tag("psi", (p, q))) == p + q
            assert quantifier_rank(make_tag("rho", (p, q))) == p + q + 1
    assert quantifier_rank(make_tag("psi_card", (5,))) == 6


def test_big_connectives():
    a, b, c = Eq("x", "y"), Eq("y", "z"), Eq("z", "w")
    assert big_and([a, b, c]) == And(And(a, b), c)
    assert big_or([a, b]) == Or(a, b)
    assert big_and([a]) == a
    with pytest.raises(ValueError):
        big_and([])
    with pytest.raises(ValueError):
        big_or([])


def test_expand_strips_tags():
    for tag in (
        make_tag("psi", (1,)),
        make_tag("rho", (1, 2)),
        make_tag("D_m", (2,), ("x",)),
        make_tag("dec_eq"),
    ):
        assert expand(tag) == tag.expansion
        assert not _has_tag(expand(tag)), tag
    nested = And(make_tag("psi", (0,)), Not(make_tag("D", (), ("x",))))
    assert not _has_tag(expand(nested))


def test_d_expansion_avoids_capture():
    assert d_expansion("x") == Forall("y", Or(Eq("x", "y"), Not(Eq("x", "y"))))
    # the bound variable steps aside when the free one is y
    assert d_expansion("y") == Forall("z", Or(Eq("y", "z"), Not(Eq("y", "z"))))


def test_alpha_equivalence():
    f = Forall("y", Eq("x", "y"))
    g = Forall("z", Eq("x", "z"))
    assert alpha_equivalent(f, g)
    # free variable names are part of the identity
    assert not alpha_equivalent(
        make_tag("D", (), ("x",)), make_tag("D", (), ("w",))
    )
    assert not alpha_equivalent(Eq("x", "y"), Eq("y", "x"))
    # tags compare through their expansions
    assert alpha_equivalent(make_tag("psi", (0,)), make_tag("psi", (0,)).expansion)


def test_make_tag_validations():
    with pytest.raises(ValueError):
        make_tag("D_m", (-1,), ("x",))
    with pytest.raises(ValueError):
        make_tag("AP", (), ("x", "x"))
    with pytest.raises(ValueError):
        make_tag("psi", (0, 2))
    with pytest.raises(ValueError):
        make_tag("rho", (1, 0))
    with pytest.raises(ValueError):
        make_tag("psi_card", (-1,))
    with pytest.raises(ValueError):
        make_tag("no_such_family")


# recognition


def test_recognize_tag_directly():
    assert recognize(make_tag("psi", (2, 3))) == ("psi", (2, 3), ())
    assert recognize(make_tag("D", (), ("x",))) == ("D", (), ("x",))


def test_recognize_expansions():
    cases = [
        ("D", (), ("x",)),
        ("D_m", (2,), ("x",)),
        ("AP", (), ("x", "y")),
        ("psi", (0,), ()),
        ("psi", (2,), ()),
        ("rho", (1,), ()),
        ("psi", (1, 2), ()),
        ("rho", (1, 1), ()),
        ("psi_card", (0,), ()),
        ("psi_card", (3,), ()),
        ("dec_eq", (), ()),
        ("stable_eq", (), ()),
    ]
    for name, params, args in cases:
        got = recognize(make_tag(name, params, args).expansion)
        assert got == (name, params, args), (name, params, got)
    # zero rounds of pruning is plain decidability, so the simpler name wins
    assert recognize(make_tag("D_m", (0,), ("x",)).expansion) == ("D", (), ("x",))


def test_recognize_is_syntactic():
    # the recognizer matches shape, not logical content
    reshaped = Forall("y", Or(Not(Eq("x", "y")), Eq("x", "y")))
    assert recognize(reshaped) is None
    assert recognize(Eq("x", "y")) is None
    assert recognize(Exists("x", Eq("x", "x"))) == ("psi_card", (0,), ())


# formatting


def test_format_tags():
    assert format_formula(make_tag("psi", (2, 3))) == "psi[2,3]"
    assert format_formula(make_tag("rho", (1,))) == "rho[1]"
    assert format_formula(make_tag("D_m", (1,), ("x",))) == "D_1(x)"
    assert format_formula(make_tag("AP", (), ("x", "y"))) == "AP(x,y)"
    assert format_formula(make_tag("dec_eq")) == "dec_eq"


def test_format_precedence():
    assert (
        format_formula(And(Or(Eq("x", "y"), Eq("y", "z")), Eq("u", "v")))
        == "(x=y | y=z) & u=v"
    )
    assert (
        format_formula(And(Eq("x", "y"), And(Eq("y", "z"), Eq("u", "v"))))
        == "x=y & (y=z & u=v)"
    )
    assert (
        format_formula(Implies(Eq("x", "y"), Implies(Eq("y", "z"), Eq("u", "v"))))
        == "x=y -> y=z -> u=v"
    )
    assert format_formula(Not(Exists("x", Eq("x", "y")))) == "~(exists x x=y)"
    assert (
        format_formula(Forall("y", Or(Eq("x", "y"), Not(Eq("x", "y")))))
        == "forall y (x=y | ~x=y)"
    )
