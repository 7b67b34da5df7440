"""Eventually periodic points of Baire space.

A Point denotes the infinite sequence that reads the preperiod, then cycles
through the period forever. Restricting to eventually periodic data makes
equality, apartness, and all the equivalence relations downstream decidable.
Canonical form is enforced on construction, so two Points denote the same
sequence exactly when they are equal as values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from .seqcore import FinSeq


def _primitive_root(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period == period[: d] * (n // d):
            return period[: d]
    return period


@dataclass(frozen=True)
class Point:
    pre: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        pre = tuple(int(x) for x in self.pre)
        period = tuple(int(x) for x in self.period)
        if not period:
            raise ValueError("period must be nonempty")
        if any(x < 0 for x in pre + period):
            raise ValueError("entries must be naturals")
        period = _primitive_root(period)
        # Shortest preperiod: a trailing pre entry equal to the last period
        # entry can be absorbed by rotating the period backwards.
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = (period[-1],) + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def constant(cls, value: int) -> "Point":
        return cls((), (value,))

    @classmethod
    def from_json(cls, obj: dict) -> "Point":
        return cls(tuple(obj.get("pre", ())), tuple(obj.get("period", (0,))))

    def to_json(self) -> dict:
        return {"pre": list(self.pre), "period": list(self.period)}

    def at(self, n: int) -> int:
        if n < len(self.pre):
            return self.pre[n]
        return self.period[(n - len(self.pre)) % len(self.period)]

    def __call__(self, n: int) -> int:
        return self.at(n)

    def bar(self, n: int) -> FinSeq:
        """The length-n initial segment."""
        return FinSeq(tuple(self.at(i) for i in range(n)))

    def shift(self, k: int = 1) -> "Point":
        """Drop the first k values."""
        if k <= len(self.pre):
            return Point(self.pre[k:], self.period)
        r = (k - len(self.pre)) % len(self.period)
        return Point((), self.period[r:] + self.period[:r])

    def with_prefix(self, s: FinSeq | tuple[int, ...]) -> "Point":
        items = s.items if isinstance(s, FinSeq) else tuple(s)
        return Point(items + self.pre, self.period)

    def map_values(self, f) -> "Point":
        return Point(tuple(f(x) for x in self.pre), tuple(f(x) for x in self.period))

    def succ_values(self) -> "Point":
        """Pointwise successor S∘α."""
        return self.map_values(lambda x: x + 1)

    def set_at(self, n: int, value: int) -> "Point":
        """The point agreeing with this one except at position n."""
        head = list(self.bar(n + 1))
        head[n] = value
        return self.shift(n + 1).with_prefix(tuple(head))

    def max_value(self) -> int:
        return max(self.pre + self.period)

    def is_nondecreasing(self) -> bool:
        # A nonconstant period returns to its start, so it must decrease
        # somewhere; in canonical form a constant period has length one.
        if len(self.period) != 1:
            return False
        chain = self.pre + self.period
        return all(chain[i] <= chain[i + 1] for i in range(len(chain) - 1))


def _alignment_window(a: Point, b: Point) -> tuple[int, int]:
    """Offset past both preperiods and one shared cycle length."""
    start = max(len(a.pre), len(b.pre))
    cycle = math.lcm(len(a.period), len(b.period))
    return start, cycle


def first_difference(a: Point, b: Point) -> int | None:
    """Least n with a(n) != b(n), or None when the points are equal.

    Scanning one shared cycle past both preperiods is exhaustive: beyond that
    the pair of values repeats.
    """
    start, cycle = _alignment_window(a, b)
    for n in range(start + cycle):
        if a.at(n) != b.at(n):
            return n
    return None


def eventually_equal(a: Point, b: Point) -> bool:
    """Whether the tails agree from some index on (the base Vitali relation)."""
    start, cycle = _alignment_window(a, b)
    return all(a.at(n) == b.at(n) for n in range(start, start + cycle))


def difference_positions(a: Point, b: Point, upto: int) -> list[int]:
    return [n for n in range(upto) if a.at(n) != b.at(n)]


ZERO = Point.constant(0)
