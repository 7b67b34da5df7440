"""Formula AST for the first-order language of equality.

Core connectives plus a layer of named families kept as tags: the
order-marking predicates D_m, apartness AP, the existence and uniqueness
sentences psi/rho (one- and two-parameter forms), the cardinality sentences
psi_card, and the decidability/stability schemata. Tags carry their full
definitional expansion; recognition of hand-written formulas is syntactic,
by alpha-equivalence against those expansions. Logically equivalent but
differently shaped formulas are deliberately not recognized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

__all__ = [
    "Eq",
    "Not",
    "And",
    "Or",
    "Implies",
    "Exists",
    "Forall",
    "Tag",
    "Formula",
    "big_and",
    "big_or",
    "free_vars",
    "quantifier_rank",
    "expand",
    "alpha_key",
    "alpha_equivalent",
    "make_tag",
    "recognize",
    "format_formula",
]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Tag:
    """A named family instance, kept alongside its expansion."""

    name: str
    params: tuple[int, ...]
    args: tuple[str, ...]
    expansion: "Formula"


Formula = Union[Eq, Not, And, Or, Implies, Exists, Forall, Tag]


def big_and(parts) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def big_or(parts) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Tag):
        return frozenset(f.args)
    raise TypeError(f"not a formula: {f!r}")


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, Eq):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_rank(f.body)
    if isinstance(f, Tag):
        return quantifier_rank(f.expansion)
    raise TypeError(f"not a formula: {f!r}")


def expand(f: Formula) -> Formula:
    """Replace every tag by its definitional expansion."""
    if isinstance(f, Tag):
        return f.expansion
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(expand(f.sub))
    if isinstance(f, And):
        return And(expand(f.left), expand(f.right))
    if isinstance(f, Or):
        return Or(expand(f.left), expand(f.right))
    if isinstance(f, Implies):
        return Implies(expand(f.left), expand(f.right))
    if isinstance(f, Exists):
        return Exists(f.var, expand(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, expand(f.body))
    raise TypeError(f"not a formula: {f!r}")


def _key(f: Formula, env: dict, depth: int):
    if isinstance(f, Eq):
        return ("=", env.get(f.left, f.left), env.get(f.right, f.right))
    if isinstance(f, Not):
        return ("~", _key(f.sub, env, depth))
    if isinstance(f, And):
        return ("&", _key(f.left, env, depth), _key(f.right, env, depth))
    if isinstance(f, Or):
        return ("|", _key(f.left, env, depth), _key(f.right, env, depth))
    if isinstance(f, Implies):
        return ("->", _key(f.left, env, depth), _key(f.right, env, depth))
    if isinstance(f, (Exists, Forall)):
        tag = "E" if isinstance(f, Exists) else "A"
        return (tag, _key(f.body, {**env, f.var: depth}, depth + 1))
    raise TypeError(f"not a core formula: {f!r}")


def alpha_key(f: Formula):
    """Structure of the expanded formula with bound variables numbered.

    Free variables keep their names, so open formulas match only with the
    same free variables in the same positions.
    """
    return _key(expand(f), {}, 0)


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    return alpha_key(f) == alpha_key(g)


# ---------------------------------------------------------------------------
# Canonical expansions

_VAR_POOL = ("y", "z", "w", "u", "v", "t")


def _fresh(avoid) -> str:
    for name in _VAR_POOL:
        if name not in avoid:
            return name
    i = 0
    while f"y{i}" in avoid:
        i += 1
    return f"y{i}"


def _decidable(x: str, y: str) -> Formula:
    return Or(Eq(x, y), Not(Eq(x, y)))


def d_expansion(x: str) -> Formula:
    y = _fresh({x})
    return Forall(y, _decidable(x, y))


def d_m_expansion(m: int, x: str) -> Formula:
    """Isolated among the points surviving m rounds of pruning: not of any
    lower mark, and of decidable equality relative to everything else that
    is not of any lower mark."""
    if m == 0:
        return d_expansion(x)
    y = _fresh({x})
    below_x = [Not(d_m_expansion(i, x)) for i in range(m)]
    below_y = big_and([Not(d_m_expansion(i, y)) for i in range(m)])
    return big_and(below_x + [Forall(y, Implies(below_y, _decidable(x, y)))])


def ap_expansion(x: str, y: str) -> Formula:
    z = _fresh({x, y})
    return Forall(z, Or(Not(Eq(z, x)), Not(Eq(z, y))))


def psi_expansion(m: int) -> Formula:
    return Exists("x", d_m_expansion(m, "x"))


def rho_expansion(m: int) -> Formula:
    x, y = "x", "y"
    unique = Forall(y, Implies(d_m_expansion(m, y), Eq(y, x)))
    return Exists(x, And(d_m_expansion(m, x), unique))


def psi_family_expansion(p: int, q: int) -> Formula:
    """At least q mutually apart points that survive p rounds of pruning."""
    xs = [f"x{i}" for i in range(q)]
    conj = [ap_expansion(xs[i], xs[j]) for i in range(q) for j in range(i + 1, q)]
    conj += [Not(d_m_expansion(j, xs[i])) for i in range(q) for j in range(p)]
    body = big_and(conj)
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def rho_family_expansion(p: int, q: int) -> Formula:
    xs = [f"x{i}" for i in range(q)]
    conj = [ap_expansion(xs[i], xs[j]) for i in range(q) for j in range(i + 1, q)]
    conj += [Not(d_m_expansion(j, xs[i])) for i in range(q) for j in range(p)]
    z = "z"
    guard = big_and([Not(d_m_expansion(j, z)) for j in range(p)])
    cover = Forall(z, Implies(guard, big_or([Eq(z, x) for x in xs])))
    body = big_and(conj + [cover])
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def psi_card_expansion(n: int) -> Formula:
    """At least n+1 pairwise unequal elements."""
    xs = [f"x{i}" for i in range(n + 1)]
    conj = [
        Not(Eq(xs[i], xs[j])) for i in range(n + 1) for j in range(i + 1, n + 1)
    ]
    body = big_and(conj) if conj else Eq(xs[0], xs[0])
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def dec_eq_expansion() -> Formula:
    return Forall("x", Forall("y", _decidable("x", "y")))


def stable_eq_expansion() -> Formula:
    return Forall("x", Forall("y", Implies(Not(Not(Eq("x", "y"))), Eq("x", "y"))))


def make_tag(name: str, params: tuple[int, ...] = (), args: tuple[str, ...] = ()) -> Tag:
    """Build a family instance with its expansion.

    Families: D(x), AP(x,y), D_m(x) with params (m,); psi/rho with params
    (m,) or (p,q); psi_card with params (n,); dec_eq and stable_eq.
    """
    params = tuple(int(v) for v in params)
    args = tuple(args)
    if name == "D":
        (x,) = args
        return Tag("D", (), args, d_expansion(x))
    if name == "D_m":
        (m,) = params
        (x,) = args
        if m < 0:
            raise ValueError("D_m needs m >= 0")
        return Tag("D_m", params, args, d_m_expansion(m, x))
    if name == "AP":
        x, y = args
        if x == y:
            raise ValueError("AP needs two distinct variables")
        return Tag("AP", (), args, ap_expansion(x, y))
    if name == "psi":
        if len(params) == 1:
            (m,) = params
            if m < 0:
                raise ValueError("psi[m] needs m >= 0")
            return Tag("psi", params, (), psi_expansion(m))
        p, q = params
        if p < 1 or q < 1:
            raise ValueError("psi[p,q] needs p,q >= 1")
        return Tag("psi", params, (), psi_family_expansion(p, q))
    if name == "rho":
        if len(params) == 1:
            (m,) = params
            if m < 0:
                raise ValueError("rho[m] needs m >= 0")
            return Tag("rho", params, (), rho_expansion(m))
        p, q = params
        if p < 1 or q < 1:
            raise ValueError("rho[p,q] needs p,q >= 1")
        return Tag("rho", params, (), rho_family_expansion(p, q))
    if name == "psi_card":
        (n,) = params
        if n < 0:
            raise ValueError("psi_card[n] needs n >= 0")
        return Tag("psi_card", params, (), psi_card_expansion(n))
    if name == "dec_eq":
        return Tag("dec_eq", (), (), dec_eq_expansion())
    if name == "stable_eq":
        return Tag("stable_eq", (), (), stable_eq_expansion())
    raise ValueError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# Recognition

_PARAM_CAP = 16


@lru_cache(maxsize=4096)
def _candidate_key(name: str, params: tuple[int, ...], args: tuple[str, ...]):
    return alpha_key(make_tag(name, params, args))


def _candidates(f: Formula):
    qr = quantifier_rank(f)
    fv = tuple(sorted(free_vars(f)))
    if not fv:
        yield ("dec_eq", (), ())
        yield ("stable_eq", (), ())
        for m in range(min(qr, _PARAM_CAP) + 1):
            yield ("psi", (m,), ())
            yield ("rho", (m,), ())
        if qr >= 1:
            yield ("psi_card", (qr - 1,), ())
        for p in range(1, min(qr, _PARAM_CAP) + 1):
            for q in range(1, min(qr, _PARAM_CAP) + 1):
                yield ("psi", (p, q), ())
                yield ("rho", (p, q), ())
    elif len(fv) == 1:
        yield ("D", (), fv)
        for m in range(min(qr, _PARAM_CAP) + 1):
            yield ("D_m", (m,), fv)
    elif len(fv) == 2:
        a, b = fv
        yield ("AP", (), (a, b))
        yield ("AP", (), (b, a))


def recognize(f: Formula):
    """The family instance a formula is, or None.

    Tags answer directly; core formulas are matched by alpha-equivalence
    against the definitional expansions, with parameters bounded by the
    formula's quantifier rank.
    """
    if isinstance(f, Tag):
        return f.name, f.params, f.args
    try:
        key = alpha_key(f)
    except TypeError:
        return None
    for name, params, args in _candidates(f):
        if quantifier_rank(make_tag(name, params, args)) == quantifier_rank(f):
            if _candidate_key(name, params, args) == key:
                return name, params, args
    return None


# ---------------------------------------------------------------------------
# Formatting

_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNARY = 4


def format_formula(f: Formula) -> str:
    return _fmt(f, 0)


def _fmt(f: Formula, prec: int) -> str:
    if isinstance(f, Tag):
        if f.name in ("dec_eq", "stable_eq"):
            return f.name
        if f.name == "D":
            return f"D({f.args[0]})"
        if f.name == "D_m":
            return f"D_{f.params[0]}({f.args[0]})"
        if f.name == "AP":
            return f"AP({f.args[0]},{f.args[1]})"
        return f"{f.name}[{','.join(str(p) for p in f.params)}]"
    if isinstance(f, Eq):
        return f"{f.left}={f.right}"
    if isinstance(f, Not):
        return f"~{_fmt(f.sub, _PREC_UNARY)}"
    if isinstance(f, (Exists, Forall)):
        kw = "exists" if isinstance(f, Exists) else "forall"
        out = f"{kw} {f.var} {_fmt(f.body, _PREC_UNARY)}"
        return f"({out})" if prec >= _PREC_UNARY else out
    if isinstance(f, And):
        out = f"{_fmt(f.left, _PREC_AND)} & {_fmt(f.right, _PREC_AND + 1)}"
        return f"({out})" if prec > _PREC_AND else out
    if isinstance(f, Or):
        out = f"{_fmt(f.left, _PREC_OR)} | {_fmt(f.right, _PREC_OR + 1)}"
        return f"({out})" if prec > _PREC_OR else out
    if isinstance(f, Implies):
        out = f"{_fmt(f.left, _PREC_IMPLIES + 1)} -> {_fmt(f.right, _PREC_IMPLIES)}"
        return f"({out})" if prec > _PREC_IMPLIES else out
    raise TypeError(f"not a formula: {f!r}")
