"""The graded toy spreads and their sum algebra.

The n-th toy spread holds the nondecreasing sequences with entries below n;
its depth structure is exactly graded, which makes it the test bed for every
rank-sensitive sentence family. This module adds the sum and product
descriptors built from toy spreads, a normal-form computation with a
replayable equivalence witness, pointwise classification by limit order, the
almost-enumeration construction, and the closure fan over a value sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import NotMember
from .points import Point
from .seqcore import FinSeq, StrictIncSeq
from .spread import SpreadLaw, toy_accepts, predicate_law, toy_law

__all__ = [
    "ToyPoint",
    "Toy",
    "Product",
    "OmegaProduct",
    "FiniteSum",
    "SeqSum",
    "ClosureFan",
    "SumDescriptor",
    "descriptor_from_json",
    "law_for",
    "branch_bound_for",
    "toy_law",
    "Classification",
    "classify_point",
    "Step",
    "DropEmpty",
    "Swap",
    "Merge",
    "Split",
    "EquivWitness",
    "normalize",
    "apply_witness",
    "apply_witness_inverse",
    "delta_point",
    "almost_enum_witness",
    "closure_fan_law",
    "closure_fan_bound",
]


@dataclass(frozen=True)
class ToyPoint:
    """A nondecreasing, eventually constant point given by its jumps.

    Each (index, value) pair says the sequence steps up to value at index;
    before the first jump the value is 0. Indices and values must both be
    strictly increasing.
    """

    jumps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        jumps = tuple((int(i), int(v)) for i, v in self.jumps)
        for i, v in jumps:
            if i < 0 or v < 1:
                raise ValueError("jump indices must be naturals, values >= 1")
        for (i1, v1), (i2, v2) in zip(jumps, jumps[1:]):
            if not (i1 < i2 and v1 < v2):
                raise ValueError("jumps must strictly increase in both coordinates")
        object.__setattr__(self, "jumps", jumps)

    def at(self, n: int) -> int:
        value = 0
        for i, v in self.jumps:
            if i <= n:
                value = v
        return value

    def __call__(self, n: int) -> int:
        return self.at(n)

    def final_value(self) -> int:
        return self.jumps[-1][1] if self.jumps else 0

    def in_toy(self, n: int) -> bool:
        return self.final_value() <= n - 1

    def to_point(self) -> Point:
        if not self.jumps:
            return Point.constant(0)
        last_index, last_value = self.jumps[-1]
        pre = tuple(self.at(i) for i in range(last_index))
        return Point(pre, (last_value,))

    @classmethod
    def from_point(cls, p: Point) -> "ToyPoint":
        if not p.is_nondecreasing():
            raise ValueError("point is not nondecreasing")
        jumps = []
        prev = 0
        for i in range(len(p.pre) + 1):
            v = p.at(i)
            if v > prev:
                jumps.append((i, v))
                prev = v
        return cls(tuple(jumps))

    def to_json(self) -> dict:
        return {"jumps": [[i, v] for i, v in self.jumps]}

    @classmethod
    def from_json(cls, obj: dict) -> "ToyPoint":
        return cls(tuple((i, v) for i, v in obj.get("jumps", ())))


# ---------------------------------------------------------------------------
# Sum descriptors


@dataclass(frozen=True)
class Toy:
    n: int


@dataclass(frozen=True)
class Product:
    n: int
    m: int


@dataclass(frozen=True)
class OmegaProduct:
    m: int


@dataclass(frozen=True)
class FiniteSum:
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))


@dataclass(frozen=True)
class SeqSum:
    alpha: Union[Point, StrictIncSeq]


@dataclass(frozen=True)
class ClosureFan:
    alpha: Point


SumDescriptor = Union[Toy, Product, OmegaProduct, FiniteSum, SeqSum, ClosureFan]


def descriptor_to_json(d: SumDescriptor) -> dict:
    if isinstance(d, Toy):
        return {"variant": "toy", "n": d.n}
    if isinstance(d, Product):
        return {"variant": "product", "n": d.n, "m": d.m}
    if isinstance(d, OmegaProduct):
        return {"variant": "omega_product", "m": d.m}
    if isinstance(d, FiniteSum):
        return {"variant": "finite_sum", "s": list(d.s)}
    if isinstance(d, SeqSum):
        return {"variant": "seq_sum", "alpha": d.alpha.to_json()}
    if isinstance(d, ClosureFan):
        return {"variant": "closure_fan", "alpha": d.alpha.to_json()}
    raise ValueError(f"not a descriptor: {d!r}")


def descriptor_from_json(obj: dict) -> SumDescriptor:
    variant = obj.get("variant")
    if variant == "toy":
        return Toy(int(obj["n"]))
    if variant == "product":
        return Product(int(obj["n"]), int(obj["m"]))
    if variant == "omega_product":
        return OmegaProduct(int(obj["m"]))
    if variant == "finite_sum":
        return FiniteSum(tuple(obj["s"]))
    if variant in ("seq_sum", "closure_fan"):
        alpha_obj = obj["alpha"]
        if "values" in alpha_obj:
            alpha: Union[Point, StrictIncSeq] = StrictIncSeq.from_json(alpha_obj)
        else:
            alpha = Point.from_json(alpha_obj)
        if variant == "closure_fan":
            if not isinstance(alpha, Point):
                raise ValueError("closure_fan takes an eventually periodic point")
            return ClosureFan(alpha)
        return SeqSum(alpha)
    raise ValueError(f"unknown descriptor variant {variant!r}")


def _component_value(d: SumDescriptor) -> Callable[[int], int]:
    if isinstance(d, FiniteSum):
        return lambda i: d.s[i] if 0 <= i < len(d.s) else -1
    if isinstance(d, SeqSum):
        alpha = d.alpha
        if isinstance(alpha, StrictIncSeq):
            return alpha.value_at
        return alpha.at
    raise ValueError("no component values")


def _tagged_toy_key(value_of):
    # Suffix key for component-tagged toy trees: below component i the
    # extensions depend only on the component's value and the last entry.
    def key(s: tuple[int, ...]) -> object:
        if not s:
            return ("root",)
        return value_of(s[0]), (s[-1] if len(s) >= 2 else 0)

    return key


def law_for(d: SumDescriptor) -> SpreadLaw:
    """The spread law whose paths are the descriptor's members.

    Members of a multi-component structure carry their component index as
    the first entry; a one-entry finite sum is the bare toy spread.
    """
    if isinstance(d, Toy):
        return toy_law(d.n)
    if isinstance(d, Product):
        n, m = d.n, d.m

        def product_accepts(s: tuple[int, ...]) -> bool:
            return not s or (s[0] < n and toy_accepts(m, s[1:]))

        return predicate_law(
            product_accepts,
            label=f"product({n},{m})",
            hereditary=True,
            suffix_key=_tagged_toy_key(lambda i: m),
        )
    if isinstance(d, OmegaProduct):
        m = d.m

        def omega_accepts(s: tuple[int, ...]) -> bool:
            return not s or (m >= 1 and toy_accepts(m, s[1:]))

        return predicate_law(
            omega_accepts,
            label=f"omega_product({m})",
            hereditary=True,
            suffix_key=_tagged_toy_key(lambda i: m),
        )
    if isinstance(d, FiniteSum):
        if len(d.s) == 1:
            return toy_law(d.s[0])
        values = d.s

        def sum_accepts(s: tuple[int, ...]) -> bool:
            if not s:
                return True
            i = s[0]
            return i < len(values) and values[i] >= 1 and toy_accepts(values[i], s[1:])

        return predicate_law(
            sum_accepts,
            label=f"finite_sum{list(values)}",
            hereditary=True,
            suffix_key=_tagged_toy_key(lambda i: values[i]),
        )
    if isinstance(d, SeqSum):
        value_at = _component_value(d)

        def seq_accepts(s: tuple[int, ...]) -> bool:
            if not s:
                return True
            v = value_at(s[0])
            return v >= 1 and toy_accepts(v, s[1:])

        return predicate_law(
            seq_accepts,
            label="seq_sum",
            hereditary=True,
            suffix_key=_tagged_toy_key(value_at),
        )
    if isinstance(d, ClosureFan):
        return closure_fan_law(d.alpha)
    raise ValueError(f"not a descriptor: {d!r}")


def branch_bound_for(d: SumDescriptor, default: int) -> int:
    """A child-index bound wide enough to see every accepted child."""
    if isinstance(d, Toy):
        return max(d.n - 1, 0)
    if isinstance(d, Product):
        return max(d.n - 1, d.m - 1, 0)
    if isinstance(d, OmegaProduct):
        return max(default, d.m - 1)
    if isinstance(d, FiniteSum):
        return max([len(d.s) - 1] + [v - 1 for v in d.s] + [0])
    return default


# ---------------------------------------------------------------------------
# Classification by limit order


@dataclass(frozen=True)
class Classification:
    """Limit order of a point, with the formula family it satisfies.

    order 0 means isolated. The point satisfies the order-marking predicate
    at its exact order and refutes the ones below it.
    """

    order: int
    isolated: bool
    eventual_value: int
    satisfies: str
    refutes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "isolated": self.isolated,
            "eventual_value": self.eventual_value,
            "satisfies": self.satisfies,
            "refutes": list(self.refutes),
        }


def classify_point(n: int, p: ToyPoint) -> Classification:
    """Limit order of p inside the n-th toy spread.

    The eventual value v determines everything: order n-1-v, isolated
    exactly when v is the top value n-1.
    """
    v = p.final_value()
    if n < 1 or v > n - 1:
        raise NotMember(f"final value {v} does not fit below {n}")
    order = n - 1 - v
    return Classification(
        order=order,
        isolated=(order == 0),
        eventual_value=v,
        satisfies=f"D_{order}",
        refutes=tuple(f"D_{i}" for i in range(order)),
    )


# ---------------------------------------------------------------------------
# Normal form with equivalence witness


@dataclass(frozen=True)
class Step:
    at: int
    pre_vec: tuple[int, ...]
    post_vec: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "step": type(self).__name__.lower(),
            "at": self.at,
            "pre": list(self.pre_vec),
            "post": list(self.post_vec),
        }


class DropEmpty(Step):
    """Remove an empty component."""


class Swap(Step):
    """Exchange two adjacent components."""


class Merge(Step):
    """Fold a component into the next one up: T_a next to T_{a+1} is T_{a+1}.

    Members of the lower component map to their pointwise successor; members
    of the upper component get a 0 prepended. Together that is a bijection
    onto the upper toy spread, split by the first value.
    """


class Split(Step):
    """Inverse of Merge: peel T_{a+1} into T_a next to T_{a+1}."""


@dataclass(frozen=True)
class EquivWitness:
    source: tuple[int, ...]
    steps: tuple[Step, ...]
    target: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "source": list(self.source),
            "steps": [st.to_json() for st in self.steps],
            "target": {"n": self.target[0], "m": self.target[1]},
        }


def normalize(s) -> tuple[int, int, EquivWitness]:
    """Reduce a finite sum of toy spreads to the form n copies of T_m.

    Works left to right: zero entries are dropped, equal entries pile up,
    a smaller newcomer is absorbed into the pile, and a bigger newcomer
    absorbs the whole pile. The absorption of T_a into a higher T_b climbs
    through Split and Merge steps. The step list is a replayable witness.
    """
    items = list(s.items if isinstance(s, FinSeq) else tuple(int(x) for x in s))
    vec = list(items)
    steps: list[Step] = []

    def record(cls, i: int, post: list[int]) -> None:
        steps.append(cls(i, tuple(vec), tuple(post)))
        vec[:] = post

    def drop(i: int) -> None:
        record(DropEmpty, i, vec[:i] + vec[i + 1 :])

    def swap(i: int) -> None:
        post = vec.copy()
        post[i], post[i + 1] = post[i + 1], post[i]
        record(Swap, i, post)

    def merge(i: int) -> None:
        record(Merge, i, vec[:i] + vec[i + 1 :])

    def split(i: int) -> None:
        record(Split, i, vec[:i] + [vec[i] - 1] + vec[i:])

    def absorb(i: int) -> None:
        # vec[i] < vec[i+1]; dissolve vec[i] upward until the gap closes.
        if vec[i] + 1 == vec[i + 1]:
            merge(i)
        else:
            split(i + 1)
            absorb(i)
            merge(i)

    block = 0  # number of leading copies of m already normalized
    m = 0
    j = 0
    while j < len(vec):
        p = vec[j]
        if p == 0:
            drop(j)
            continue
        if block == 0:
            m, block, j = p, 1, 1
            continue
        if p == m:
            block += 1
            j += 1
        elif p > m:
            for k in range(block, 0, -1):
                absorb(k - 1)
            m, block, j = p, 1, 1
        else:
            swap(j - 1)
            absorb(j - 1)
    if block == 0:
        return 0, 1, EquivWitness(tuple(items), tuple(steps), (0, 1))
    return block, m, EquivWitness(tuple(items), tuple(steps), (block, m))


def _decode_member(x: Point, vec: tuple[int, ...]) -> tuple[int, Point]:
    if not vec:
        raise NotMember("the empty sum has no members")
    if len(vec) == 1:
        comp, tail = 0, x
    else:
        comp, tail = x.at(0), x.shift(1)
        if comp >= len(vec):
            raise NotMember(f"component index {comp} out of range")
    bound = vec[comp]
    if not tail.is_nondecreasing() or ToyPoint.from_point(tail).final_value() > bound - 1:
        raise NotMember(f"tail is not a member of the toy spread below {bound}")
    return comp, tail


def _encode_member(comp: int, tail: Point, vec: tuple[int, ...]) -> Point:
    if len(vec) == 1:
        return tail
    return tail.with_prefix((comp,))


def _apply_step(step: Step, comp: int, tail: Point) -> tuple[int, Point]:
    i = step.at
    if isinstance(step, DropEmpty):
        return (comp - 1, tail) if comp > i else (comp, tail)
    if isinstance(step, Swap):
        if comp == i:
            return i + 1, tail
        if comp == i + 1:
            return i, tail
        return comp, tail
    if isinstance(step, Merge):
        if comp == i:
            return i, tail.map_values(lambda v: v + 1)
        if comp == i + 1:
            return i, tail.with_prefix((0,))
        return (comp - 1, tail) if comp > i + 1 else (comp, tail)
    if isinstance(step, Split):
        if comp == i:
            if tail.at(0) >= 1:
                return i, tail.map_values(lambda v: v - 1)
            return i + 1, tail.shift(1)
        return (comp + 1, tail) if comp > i else (comp, tail)
    raise ValueError(f"unknown step {step!r}")


def _unapply_step(step: Step, comp: int, tail: Point) -> tuple[int, Point]:
    i = step.at
    if isinstance(step, DropEmpty):
        return (comp + 1, tail) if comp >= i else (comp, tail)
    if isinstance(step, Swap):
        return _apply_step(step, comp, tail)
    if isinstance(step, Merge):
        # Undo the fold by splitting on the first value.
        if comp == i:
            if tail.at(0) >= 1:
                return i, tail.map_values(lambda v: v - 1)
            return i + 1, tail.shift(1)
        return (comp + 1, tail) if comp > i else (comp, tail)
    if isinstance(step, Split):
        if comp == i:
            return i, tail.map_values(lambda v: v + 1)
        if comp == i + 1:
            return i, tail.with_prefix((0,))
        return (comp - 1, tail) if comp > i + 1 else (comp, tail)
    raise ValueError(f"unknown step {step!r}")


def apply_witness(w: EquivWitness, x) -> Point:
    """Map a member of the source sum through the witness chain."""
    if isinstance(x, ToyPoint):
        x = x.to_point()
    if not w.steps:
        _decode_member(x, w.source)
        return x
    comp, tail = _decode_member(x, w.steps[0].pre_vec)
    for step in w.steps:
        comp, tail = _apply_step(step, comp, tail)
    return _encode_member(comp, tail, w.steps[-1].post_vec)


def apply_witness_inverse(w: EquivWitness, y) -> Point:
    """Map a member of the normal form back to the source sum."""
    if isinstance(y, ToyPoint):
        y = y.to_point()
    if not w.steps:
        _decode_member(y, w.source)
        return y
    comp, tail = _decode_member(y, w.steps[-1].post_vec)
    for step in reversed(w.steps):
        comp, tail = _unapply_step(step, comp, tail)
    return _encode_member(comp, tail, w.steps[0].pre_vec)


# ---------------------------------------------------------------------------
# Almost-enumeration


def delta_point(n: int, code: int) -> Point:
    """The code-indexed candidate list: a nonempty accepted sequence stands
    for its constant extension, everything else for the zero point."""
    seq = FinSeq.from_code(code)
    if len(seq) > 0 and toy_accepts(n, seq.items):
        return Point(seq.items, (seq.items[-1],))
    return Point.constant(0)


def almost_enum_witness(
    n: int, p: ToyPoint, eps: Callable[[FinSeq], int]
) -> tuple[int, int]:
    """Find a candidate the point resists leaving, to the demanded accuracy.

    Starting from the one-value prefix, ask eps how long the agreement with
    the candidate's constant extension must be; on failure the point has
    jumped past the candidate's value, so extend the prefix through that
    jump and try again. The eventual value is reached after at most n-1
    climbs, where agreement can no longer fail.
    """
    if n < 1 or not p.in_toy(n):
        raise NotMember(f"point does not live below {n}")
    cand = tuple(p.at(i) for i in range(1))
    while True:
        want = int(eps(FinSeq(cand)))
        last = cand[-1]
        if all(p.at(i) == (cand[i] if i < len(cand) else last) for i in range(want)):
            return FinSeq(cand).code, want
        jump = next(i for i, v in p.jumps if v > last)
        cand = tuple(p.at(i) for i in range(jump + 1))


# ---------------------------------------------------------------------------
# Closure fan


def closure_fan_law(alpha: Point) -> SpreadLaw:
    """The fan closing off the bundle of toy tails hung along the zero spine.

    Accepted sequences: all-zero ones, and those that leave zero for the
    first time at some position k with value exactly 1 and then follow a
    member of the toy spread below alpha(k). Closing the union adds the
    zero point itself.
    """

    def accepts(s: tuple[int, ...]) -> bool:
        for k, v in enumerate(s):
            if v != 0:
                return v == 1 and alpha.at(k) >= 1 and toy_accepts(alpha.at(k), s[k + 1 :])
        return True

    def key(s: tuple[int, ...]) -> object:
        for k, v in enumerate(s):
            if v != 0:
                tail = s[k + 1 :]
                return alpha.at(k), (tail[-1] if tail else 0)
        return ("spine", len(s))

    return predicate_law(accepts, label="closure_fan", hereditary=True, suffix_key=key)


def closure_fan_bound(alpha: Point) -> Callable[[FinSeq], int]:
    """A child bound certifying that the closure law is a fan."""

    def bound(node: FinSeq) -> int:
        items = node.items
        for k, v in enumerate(items):
            if v != 0:
                return max(alpha.at(k) - 1, 0)
        return 1

    return bound
