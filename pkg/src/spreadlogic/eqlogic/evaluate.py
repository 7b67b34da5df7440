"""Closed-form evaluation of the recognized sentence families.

Every verdict here reduces to counting, per component toy spread T_v of a
descriptor, the points that survive p pruning rounds and sit isolated among
the survivors: none when v <= p, exactly one (the bottom point) when
v == p+1, and infinitely many when v > p+1. Summing over components gives
the survivor count the psi/rho families are about; sizes and all-isolated
checks follow the same component walk. The tree oracle recomputes the same
verdicts from truncations without using any of these formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..points import Point
from ..seqcore import StrictIncSeq
from ..toyspread import (
    ClosureFan,
    FiniteSum,
    OmegaProduct,
    Product,
    SeqSum,
    SumDescriptor,
    Toy,
)
from .formulas import And, Formula, Implies, Not, Or, free_vars, recognize

__all__ = [
    "Verdict",
    "HOLDS",
    "NEG_HOLDS",
    "order_count",
    "structure_size",
    "all_isolated",
    "evaluate",
]

INF = math.inf


@dataclass(frozen=True)
class Verdict:
    kind: str  # "holds" | "neg_holds" | "unsupported"
    detail: str = ""

    @classmethod
    def of(cls, truth: bool) -> "Verdict":
        return HOLDS if truth else NEG_HOLDS

    @classmethod
    def unsupported(cls, reason: str) -> "Verdict":
        return cls("unsupported", reason)

    @property
    def is_holds(self) -> bool:
        return self.kind == "holds"

    @property
    def is_neg(self) -> bool:
        return self.kind == "neg_holds"

    @property
    def is_unsupported(self) -> bool:
        return self.kind == "unsupported"

    def to_json(self) -> dict:
        out = {"verdict": self.kind}
        if self.detail:
            out["detail"] = self.detail
        return out


HOLDS = Verdict("holds")
NEG_HOLDS = Verdict("neg_holds")


def _verdict_not(a: Verdict) -> Verdict:
    if a.is_holds:
        return NEG_HOLDS
    if a.is_neg:
        return HOLDS
    return a


def _verdict_and(a: Verdict, b: Verdict) -> Verdict:
    if a.is_neg or b.is_neg:
        return NEG_HOLDS
    if a.is_holds and b.is_holds:
        return HOLDS
    return a if a.is_unsupported else b


def _verdict_or(a: Verdict, b: Verdict) -> Verdict:
    if a.is_holds or b.is_holds:
        return HOLDS
    if a.is_neg and b.is_neg:
        return NEG_HOLDS
    return a if a.is_unsupported else b


def _verdict_implies(a: Verdict, b: Verdict) -> Verdict:
    return _verdict_or(_verdict_not(a), b)


# ---------------------------------------------------------------------------
# Component counting


def _survivors_in_toy(v: int, p: int):
    # Points of T_v that survive p pruning rounds and are isolated among
    # the survivors; they are automatically mutually apart.
    if v <= p:
        return 0
    if v == p + 1:
        return 1
    return INF


def _toy_size(v: int):
    if v == 0:
        return 0
    if v == 1:
        return 1
    return INF


def _component_multiset(s: SumDescriptor) -> dict[int, float]:
    """Component value -> how many components carry it (may be infinite)."""
    if isinstance(s, Toy):
        return {s.n: 1}
    if isinstance(s, Product):
        return {s.m: s.n} if s.n > 0 else {}
    if isinstance(s, OmegaProduct):
        return {s.m: INF}
    if isinstance(s, FiniteSum):
        out: dict[int, float] = {}
        for v in s.s:
            if v >= 1:
                out[v] = out.get(v, 0) + 1
        return out
    if isinstance(s, SeqSum) and isinstance(s.alpha, Point):
        out = {}
        for v in s.alpha.pre:
            if v >= 1:
                out[v] = out.get(v, 0) + 1
        for v in s.alpha.period:
            if v >= 1:
                out[v] = INF
        return out
    raise ValueError(f"no component multiset for {s!r}")


def order_count(s: SumDescriptor, p: int):
    """How many mutually apart points survive p pruning rounds."""
    if isinstance(s, SeqSum) and isinstance(s.alpha, StrictIncSeq):
        # Strictly increasing component values are unbounded, so every
        # pruning round leaves infinitely many components inhabited.
        return INF
    total = 0
    for v, count in _component_multiset(s).items():
        contribution = _survivors_in_toy(v, p)
        if contribution and count:
            total += count * contribution
    return total


def structure_size(s: SumDescriptor):
    """Members up to pairwise inequality."""
    if isinstance(s, SeqSum) and isinstance(s.alpha, StrictIncSeq):
        return INF
    total = 0
    for v, count in _component_multiset(s).items():
        size = _toy_size(v)
        if size and count:
            total += count * size
    return total


def all_isolated(s: SumDescriptor) -> bool:
    """Whether every member is an isolated point, making equality decidable."""
    if isinstance(s, SeqSum) and isinstance(s.alpha, StrictIncSeq):
        return False
    return all(v <= 1 for v, count in _component_multiset(s).items() if count)


# ---------------------------------------------------------------------------
# Evaluation


def _family_verdict(rec, s: SumDescriptor) -> Verdict:
    name, params, args = rec
    if args:
        return Verdict.unsupported("open formulas have no structure verdict")
    if name == "psi":
        if len(params) == 1:
            return Verdict.of(order_count(s, params[0]) >= 1)
        p, q = params
        return Verdict.of(order_count(s, p) >= q)
    if name == "rho":
        if len(params) == 1:
            return Verdict.of(order_count(s, params[0]) == 1)
        p, q = params
        return Verdict.of(order_count(s, p) == q)
    if name == "psi_card":
        return Verdict.of(structure_size(s) >= params[0] + 1)
    if name == "dec_eq":
        return Verdict.of(all_isolated(s))
    if name == "stable_eq":
        # Equality of sequences is refutation-stable outright.
        return HOLDS
    return Verdict.unsupported(f"family {name} has no closed form")


def evaluate(f: Formula, s: SumDescriptor) -> Verdict:
    """Closed-form verdict for a recognized family instance over a
    descriptor, or a boolean combination of such instances.

    Closure fans have no closed form here; use the tree oracle.
    """
    if isinstance(s, ClosureFan):
        return Verdict.unsupported("closure fans are oracle-only")
    if free_vars(f):
        return Verdict.unsupported("formula has free variables")
    return _evaluate_closed(f, s)


def _evaluate_closed(f: Formula, s: SumDescriptor) -> Verdict:
    rec = recognize(f)
    if rec is not None:
        return _family_verdict(rec, s)
    if isinstance(f, Not):
        return _verdict_not(_evaluate_closed(f.sub, s))
    if isinstance(f, And):
        return _verdict_and(_evaluate_closed(f.left, s), _evaluate_closed(f.right, s))
    if isinstance(f, Or):
        return _verdict_or(_evaluate_closed(f.left, s), _evaluate_closed(f.right, s))
    if isinstance(f, Implies):
        return _verdict_implies(
            _evaluate_closed(f.left, s), _evaluate_closed(f.right, s)
        )
    return Verdict.unsupported("not a recognized family instance")
