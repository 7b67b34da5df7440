"""Codings of finite sequences, the pairing function, and strictly increasing sequences.

The conventions: the code of the empty sequence is 0, lookup past the end of a
finite sequence returns 0, and the pairing function is a bijection with
computable inverses. Nothing downstream depends on which bijections these are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property


def pair(m: int, n: int) -> int:
    """Cantor pairing, a bijection from pairs of naturals onto the naturals."""
    return (m + n) * (m + n + 1) // 2 + n


def unpair(c: int) -> tuple[int, int]:
    """Inverse of pair: unpair(pair(m, n)) == (m, n)."""
    # w is the diagonal index: the largest w with w*(w+1)/2 <= c.
    w = (math.isqrt(8 * c + 1) - 1) // 2
    n = c - w * (w + 1) // 2
    return w - n, n


def first(c: int) -> int:
    return unpair(c)[0]


def second(c: int) -> int:
    return unpair(c)[1]


def encode(items: list[int] | tuple[int, ...]) -> int:
    """Code of a finite sequence; a bijection from sequences onto the naturals."""
    code = 0
    for x in reversed(items):
        if x < 0:
            raise ValueError("sequence entries must be naturals")
        code = 1 + pair(x, code)
    return code


def decode(code: int) -> tuple[int, ...]:
    if code < 0:
        raise ValueError("codes are naturals")
    items = []
    while code != 0:
        head, code = unpair(code - 1)
        items.append(head)
    return tuple(items)


@dataclass(frozen=True)
class FinSeq:
    """A finite sequence of naturals with its numeric code."""

    items: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(int(x) for x in self.items))
        if any(x < 0 for x in self.items):
            raise ValueError("sequence entries must be naturals")

    @classmethod
    def from_code(cls, code: int) -> "FinSeq":
        return cls(decode(code))

    @cached_property
    def code(self) -> int:
        # Codes grow roughly doubly exponentially in length, so compute lazily.
        return encode(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __call__(self, n: int) -> int:
        """Lookup; past-the-end positions read as 0."""
        return self.items[n] if n < len(self.items) else 0

    def __iter__(self):
        return iter(self.items)

    def to_json(self) -> list[int]:
        return list(self.items)


def seq_concat(s: FinSeq, t: FinSeq) -> FinSeq:
    return FinSeq(s.items + t.items)


def is_prefix(s: FinSeq, t: FinSeq) -> bool:
    return s.items == t.items[: len(s.items)]


def is_strict_prefix(s: FinSeq, t: FinSeq) -> bool:
    return len(s) < len(t) and is_prefix(s, t)


@dataclass(frozen=True)
class StrictIncSeq:
    """A strictly increasing sequence given by explicit values and periodic increments.

    value_at(i) returns values[i] for i < len(values); beyond that the sequence
    keeps growing by cycling through period_increments, each of which must be
    positive so strictness never fails.
    """

    values: tuple[int, ...]
    period_increments: tuple[int, ...] = (1,)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(
            self, "period_increments", tuple(int(d) for d in self.period_increments)
        )
        if not self.values:
            raise ValueError("need at least one explicit value")
        if any(v < 0 for v in self.values):
            raise ValueError("values must be naturals")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("explicit values must be strictly increasing")
        if not self.period_increments or any(d < 1 for d in self.period_increments):
            raise ValueError("period increments must be positive")

    @cached_property
    def _cycle_sum(self) -> int:
        return sum(self.period_increments)

    @cached_property
    def _prefix_sums(self) -> tuple[int, ...]:
        sums = [0]
        for d in self.period_increments:
            sums.append(sums[-1] + d)
        return tuple(sums)

    def value_at(self, i: int) -> int:
        if i < len(self.values):
            return self.values[i]
        k = i - len(self.values) + 1
        whole, rest = divmod(k, len(self.period_increments))
        return self.values[-1] + whole * self._cycle_sum + self._prefix_sums[rest]

    def __call__(self, i: int) -> int:
        return self.value_at(i)

    def first_value_at_least(self, bound: int) -> int:
        """Least index i with value_at(i) >= bound."""
        i = 0
        while self.value_at(i) < bound:
            i += 1
        return i

    def to_json(self) -> dict:
        return {
            "values": list(self.values),
            "period_increments": list(self.period_increments),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StrictIncSeq":
        return cls(tuple(obj["values"]), tuple(obj.get("period_increments", (1,))))
