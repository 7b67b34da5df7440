"""Tail-agreement equivalence relations on eventually periodic sequences.

The base relation holds when two sequences eventually agree. An expression
grammar builds its extensions: a one-step enlargement (plus), explicit and
schematic unions, and iterated towers. On eventually periodic data every
expression in the decidable fragment collapses to the base relation
pointwise; the structure is still tracked exactly because the refuter
module drives strategies against it. Fans attached to the starred
expressions realize the membership trees that those refutations walk.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .errors import NotEStar, NotInE, NotVitaliEquivalent, ParseError
from .points import ZERO, Point, eventually_equal, first_difference
from .seqcore import FinSeq, first
from .spread import SpreadLaw, predicate_law

__all__ = [
    "Almost",
    "Base",
    "ClassEquality",
    "DEFAULT_UNION_PREFIX",
    "FanForRel",
    "Modulus",
    "NegNeg",
    "OmegaTower",
    "Plus",
    "RelExpr",
    "Tower",
    "UnionSeq",
    "decidable_equality_on_class",
    "decide",
    "desugar",
    "embed_in_estar",
    "estar_normal_form",
    "fan_for",
    "fin_member",
    "firing_child",
    "format_rel",
    "in_E",
    "is_estar",
    "is_transitive_flagged",
    "parse_rel",
    "plus",
    "rel_from_json",
    "rel_to_json",
    "shift",
    "transitive_closure_expr",
    "union",
]

# Schematic unions keep this many explicit children; decisions consult only
# the explicit prefix, so runs are reproducible from the serialized tree.
DEFAULT_UNION_PREFIX = 8


class RelExpr:
    """Base class for relation expressions. Instances are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Base(RelExpr):
    """Tails eventually agree."""


@dataclass(frozen=True)
class Plus(RelExpr):
    """One-step enlargement: the base relation or the child already holds."""

    child: RelExpr


@dataclass(frozen=True)
class UnionSeq(RelExpr):
    """Union of the children; a generator id marks a schematic infinite union."""

    children: tuple[RelExpr, ...]
    generator: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("union needs at least one child")


@dataclass(frozen=True)
class NegNeg(RelExpr):
    """Double negation of the base relation; the identity on decidable data."""


@dataclass(frozen=True)
class Almost(RelExpr):
    """The disagreement set is finite."""


@dataclass(frozen=True)
class Tower(RelExpr):
    """i-fold enlargement of the base relation."""

    i: int

    def __post_init__(self):
        if self.i < 0:
            raise ValueError("tower level must be a natural number")


@dataclass(frozen=True)
class OmegaTower(RelExpr):
    """Union of all tower levels."""


def desugar(r: RelExpr) -> RelExpr:
    """Rewrite towers into the core constructors, recursively."""
    if isinstance(r, Tower):
        out: RelExpr = Base()
        for _ in range(r.i):
            out = Plus(out)
        return out
    if isinstance(r, OmegaTower):
        return UnionSeq(
            tuple(desugar(Tower(i)) for i in range(DEFAULT_UNION_PREFIX)),
            generator="omega-tower",
        )
    if isinstance(r, Plus):
        return Plus(desugar(r.child))
    if isinstance(r, UnionSeq):
        return UnionSeq(tuple(desugar(c) for c in r.children), generator=r.generator)
    return r


def in_E(r: RelExpr) -> bool:
    """Whether the expression denotes a member of the extension class."""
    d = desugar(r)
    if isinstance(d, Base):
        return True
    if isinstance(d, Plus):
        return in_E(d.child)
    if isinstance(d, UnionSeq):
        return all(in_E(c) for c in d.children)
    return False


def is_estar(r: RelExpr) -> bool:
    """Whether the expression matches the starred grammar.

    That grammar admits the base relation itself and one-step enlargements
    of unions of class members, nothing else.
    """
    d = desugar(r)
    if isinstance(d, Base):
        return True
    if isinstance(d, Plus) and isinstance(d.child, UnionSeq):
        return all(in_E(c) for c in d.child.children)
    return False


def is_transitive_flagged(r: RelExpr) -> bool:
    """Transitive by construction: the base relation or an iterated tower union.

    Arbitrary expressions are never inspected for transitivity; only shapes
    built by transitive_closure_expr (and the omega tower, which is one)
    carry the flag.
    """
    if isinstance(r, OmegaTower):
        return True
    if isinstance(r, UnionSeq) and r.generator in ("plus-tower", "omega-tower"):
        return True
    return isinstance(desugar(r), Base)


# ---------------------------------------------------------------------------
# Decisions on eventually periodic pairs


def decide(r: RelExpr, a: Point, b: Point) -> bool:
    """Decide the relation on an eventually periodic pair.

    The one-step enlargement unfolds to a disjunction with the base
    relation: on eventually periodic data the enlargement condition is
    decidable and equivalent to it. Double negation is likewise the
    identity there, and a finite disagreement set is the same as eventual
    tail agreement, so those comparators read through to the base decision.
    """
    d = desugar(r)
    return _decide(d, a, b)


def _decide(d: RelExpr, a: Point, b: Point) -> bool:
    if isinstance(d, Base):
        return eventually_equal(a, b)
    if isinstance(d, Plus):
        return eventually_equal(a, b) or _decide(d.child, a, b)
    if isinstance(d, UnionSeq):
        return any(_decide(c, a, b) for c in d.children)
    if isinstance(d, NegNeg):
        return eventually_equal(a, b)
    if isinstance(d, Almost):
        # Finitely many disagreements between eventually periodic sequences
        # is exactly eventual tail agreement: a disagreement inside the
        # aligned cycle recurs forever.
        return eventually_equal(a, b)
    raise TypeError(f"not a relation expression: {d!r}")


def firing_child(r: RelExpr, a: Point, b: Point) -> int | None:
    """Index of the first union child that holds on the pair, if any."""
    d = desugar(r)
    if not isinstance(d, UnionSeq):
        raise ValueError("firing_child needs a union at the root")
    for i, c in enumerate(d.children):
        if _decide(c, a, b):
            return i
    return None


def plus(r: RelExpr) -> RelExpr:
    """One-step enlargement, kept in tower form when the operand is one."""
    if isinstance(r, Base):
        return Tower(1)
    if isinstance(r, Tower):
        return Tower(r.i + 1)
    return Plus(r)


def union(rs) -> UnionSeq:
    return UnionSeq(tuple(rs))


def _iterated_plus(r: RelExpr, i: int) -> RelExpr:
    if isinstance(desugar(r), Base):
        return Tower(i)
    out = r
    for _ in range(i):
        out = Plus(out)
    return out


def embed_in_estar(r: RelExpr) -> RelExpr:
    """A starred expression containing the given class member.

    The shape is preserved under a pointwise containment: the base relation
    is starred already, a one-step enlargement embeds its child, and a
    union embeds each child under one shared enlargement.
    """
    if not in_E(r):
        raise NotInE(f"{format_rel(r)} is outside the extension class")
    d = desugar(r)
    if isinstance(d, Base):
        return Base()
    if isinstance(d, Plus):
        return Plus(UnionSeq((embed_in_estar(d.child),)))
    return Plus(
        UnionSeq(tuple(embed_in_estar(c) for c in d.children), generator=d.generator)
    )


def transitive_closure_expr(r: RelExpr) -> UnionSeq:
    """Union of the iterated enlargements of a transitive class member.

    Refuses operands without the transitive-by-construction flag: for an
    arbitrary class member no transitive extension inside the class is
    known, and the closure of a non-transitive operand would be a guess.
    """
    if not in_E(r):
        raise NotInE(f"{format_rel(r)} is outside the extension class")
    if not is_transitive_flagged(r):
        raise NotInE(
            f"{format_rel(r)} carries no transitivity flag; "
            "only the base relation and outputs of this operation qualify"
        )
    children = tuple(_iterated_plus(r, i) for i in range(DEFAULT_UNION_PREFIX))
    return UnionSeq(children, generator="plus-tower")


def fin_member(r: RelExpr, a: Point) -> bool:
    """Whether the point is related to the zero sequence."""
    return decide(r, a, ZERO)


def shift(a: Point) -> Point:
    """Drop the first coordinate."""
    return a.shift(1)


# ---------------------------------------------------------------------------
# Equality on a single equivalence class


class ClassEquality(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not_equal"


def decidable_equality_on_class(gamma: Point, a: Point) -> ClassEquality:
    """Equality restricted to one base-relation class is decidable.

    Related points differ in at most finitely many places, all within the
    aligned comparison window, so scanning it settles equality outright.
    """
    if not eventually_equal(gamma, a):
        raise NotVitaliEquivalent(
            "points are not related, so this equality test does not apply"
        )
    if first_difference(gamma, a) is None:
        return ClassEquality.EQUAL
    return ClassEquality.NOT_EQUAL


# ---------------------------------------------------------------------------
# Fans for starred expressions


@dataclass(frozen=True)
class Modulus:
    """Prefix length and tail bound pair supplied by a continuity claim."""

    p: int
    n: int

    def __post_init__(self):
        if self.p < 0 or self.n < 0:
            raise ValueError("modulus components must be natural numbers")

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n}

    @classmethod
    def from_json(cls, obj: dict) -> "Modulus":
        return cls(int(obj["p"]), int(obj["n"]))


@dataclass(frozen=True)
class FanForRel:
    """Fan attached to a starred expression.

    Members carry at most one marked coordinate per enlargement layer: an
    all-zero spine up to the first nonzero entry, which must be 1, then a
    member of the child fan selected by unpairing that position. All
    entries are 0 or 1, so the constant bound certifies the fan property.
    """

    expr: RelExpr
    law: SpreadLaw
    bound: Callable[[FinSeq], int]


def estar_normal_form(r: RelExpr) -> RelExpr:
    """Starred shape with every union child starred as well.

    Children already matching the starred grammar are normalized in place;
    plain class members are embedded first. The result is the tree the fan
    construction and refutation descent both walk, one layer per
    enlargement.
    """
    if not is_estar(r):
        raise NotEStar(f"{format_rel(r)} does not match the starred grammar")
    d = desugar(r)
    if isinstance(d, Base):
        return d
    inner = d.child
    children = tuple(
        estar_normal_form(c) if is_estar(c) else embed_in_estar(c)
        for c in inner.children
    )
    return Plus(UnionSeq(children, generator=inner.generator))


def _fan_accepts(d: RelExpr, s: tuple[int, ...]) -> bool:
    # d is in starred normal form: the base relation, or one enlargement
    # layer over starred children.
    if isinstance(d, Base):
        return all(v <= 1 for v in s) and sum(1 for v in s if v) <= 1
    k = next((i for i, v in enumerate(s) if v != 0), None)
    if k is None:
        return True
    if s[k] != 1:
        return False
    cs = d.child.children
    return _fan_accepts(cs[first(k) % len(cs)], s[k + 1 :])


def fan_for(r: RelExpr) -> FanForRel:
    d = estar_normal_form(r)

    def accepts(s: tuple[int, ...]) -> bool:
        return _fan_accepts(d, s)

    # Rejection is monotone: an oversize entry or a rejected child tail
    # stays wrong under every extension.
    law = predicate_law(accepts, label=f"fan({format_rel(r)})", hereditary=True)
    return FanForRel(expr=r, law=law, bound=lambda node: 1)


# ---------------------------------------------------------------------------
# Serialization

_ATOMS = {
    "base": Base,
    "negneg": NegNeg,
    "almost": Almost,
    "omega-tower": OmegaTower,
}


def format_rel(r: RelExpr) -> str:
    if isinstance(r, Base):
        return "(base)"
    if isinstance(r, Plus):
        return f"(plus {format_rel(r.child)})"
    if isinstance(r, UnionSeq):
        return "(union " + " ".join(format_rel(c) for c in r.children) + ")"
    if isinstance(r, NegNeg):
        return "(negneg)"
    if isinstance(r, Almost):
        return "(almost)"
    if isinstance(r, Tower):
        return f"(tower {r.i})"
    if isinstance(r, OmegaTower):
        return "(omega-tower)"
    raise TypeError(f"not a relation expression: {r!r}")


def parse_rel(text: str) -> RelExpr:
    """Parse the parenthesized expression syntax."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    expr, rest = _parse_tokens(tokens, 0)
    if rest != len(tokens):
        raise ParseError("unexpected trailing input", rest)
    return expr


def _parse_tokens(tokens: list[str], i: int) -> tuple[RelExpr, int]:
    if i >= len(tokens):
        raise ParseError("unexpected end of input", i)
    if tokens[i] != "(":
        raise ParseError(f"expected '(' before {tokens[i]!r}", i)
    i += 1
    if i >= len(tokens):
        raise ParseError("unexpected end of input", i)
    head = tokens[i]
    i += 1
    if head in _ATOMS:
        expr: RelExpr = _ATOMS[head]()
    elif head == "plus":
        child, i = _parse_tokens(tokens, i)
        expr = Plus(child)
    elif head == "union":
        children = []
        while i < len(tokens) and tokens[i] == "(":
            child, i = _parse_tokens(tokens, i)
            children.append(child)
        if not children:
            raise ParseError("union needs at least one child", i)
        expr = UnionSeq(tuple(children))
    elif head == "tower":
        if i >= len(tokens) or not tokens[i].isdigit():
            raise ParseError("tower needs a level", i)
        expr = Tower(int(tokens[i]))
        i += 1
    else:
        raise ParseError(f"unknown constructor {head!r}", i - 1)
    if i >= len(tokens) or tokens[i] != ")":
        raise ParseError("expected ')'", i)
    return expr, i + 1


def rel_to_json(r: RelExpr) -> dict:
    if isinstance(r, Base):
        return {"op": "base"}
    if isinstance(r, Plus):
        return {"op": "plus", "child": rel_to_json(r.child)}
    if isinstance(r, UnionSeq):
        out: dict = {"op": "union", "children": [rel_to_json(c) for c in r.children]}
        if r.generator is not None:
            out["generator"] = r.generator
        return out
    if isinstance(r, NegNeg):
        return {"op": "negneg"}
    if isinstance(r, Almost):
        return {"op": "almost"}
    if isinstance(r, Tower):
        return {"op": "tower", "i": r.i}
    if isinstance(r, OmegaTower):
        return {"op": "omega-tower"}
    raise TypeError(f"not a relation expression: {r!r}")


def rel_from_json(obj: dict) -> RelExpr:
    op = obj.get("op")
    if op == "base":
        return Base()
    if op == "plus":
        return Plus(rel_from_json(obj["child"]))
    if op == "union":
        return UnionSeq(
            tuple(rel_from_json(c) for c in obj["children"]),
            generator=obj.get("generator"),
        )
    if op == "negneg":
        return NegNeg()
    if op == "almost":
        return Almost()
    if op == "tower":
        return Tower(int(obj["i"]))
    if op == "omega-tower":
        return OmegaTower()
    raise ValueError(f"unknown relation op {op!r}")
