"""Classical decision procedure for pure equality sentences.

Over the unique complete extension of the infinite theory with decidable
equality, truth of a sentence depends only on which bound variables are
equal, never on what they denote. The decision walks the sentence carrying
that partition: an existential tries joining each existing class and one
fresh class (an infinite domain always has a fresh element), a universal
must survive all of them. The independent check is brute evaluation in a
small finite model, which agrees up to the quantifier rank of the sentence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..errors import ScopeError
from .formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    big_and,
    expand,
    free_vars,
    quantifier_rank,
)

__all__ = [
    "EqualityType",
    "enumerate_equality_types",
    "qe_decide",
    "model_truth",
]


@dataclass(frozen=True)
class EqualityType:
    """A complete =/!= pattern over variable positions 0..n-1.

    Pairs listed in eq_pairs are equalities; every other pair i<j is an
    inequality.
    """

    n: int
    eq_pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.eq_pairs:
            if not (0 <= i < j < self.n):
                raise ValueError(f"pair ({i},{j}) out of range for n={self.n}")

    def classes(self) -> list[set[int]]:
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in self.eq_pairs:
            parent[find(i)] = find(j)
        groups: dict[int, set[int]] = {}
        for i in range(self.n):
            groups.setdefault(find(i), set()).add(i)
        return sorted(groups.values(), key=min)

    def is_consistent(self) -> bool:
        """Whether the pattern is satisfiable: the transitive closure of
        its equalities must not glue together a pair it declares unequal."""
        cls = {i: k for k, group in enumerate(self.classes()) for i in group}
        return all(
            (i, j) in self.eq_pairs
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if cls[i] == cls[j]
        )

    def as_formula(self, var_names) -> Formula:
        names = list(var_names)
        if len(names) != self.n:
            raise ValueError("wrong number of variable names")
        parts = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                atom = Eq(names[i], names[j])
                parts.append(atom if (i, j) in self.eq_pairs else Not(atom))
        return big_and(parts) if parts else Eq(names[0], names[0])


def enumerate_equality_types(n: int):
    """All complete patterns over n positions, consistent or not."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        chosen = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        yield EqualityType(n, chosen)


def qe_decide(f: Formula) -> bool:
    """Truth of a sentence in the unique classical complete extension."""
    if free_vars(f):
        raise ScopeError(f"not a sentence: free variables {sorted(free_vars(f))}")
    return _truth_infinite(expand(f), {})


def _truth_infinite(f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _truth_infinite(f.sub, env)
    if isinstance(f, And):
        return _truth_infinite(f.left, env) and _truth_infinite(f.right, env)
    if isinstance(f, Or):
        return _truth_infinite(f.left, env) or _truth_infinite(f.right, env)
    if isinstance(f, Implies):
        return not _truth_infinite(f.left, env) or _truth_infinite(f.right, env)
    if isinstance(f, (Exists, Forall)):
        ids = sorted(set(env.values()))
        fresh = (max(ids) + 1) if ids else 0
        options = (dict(env, **{f.var: c}) for c in ids + [fresh])
        results = (_truth_infinite(f.body, e) for e in options)
        return any(results) if isinstance(f, Exists) else all(results)
    raise TypeError(f"not a core formula: {f!r}")


def model_truth(f: Formula, size: int) -> bool:
    """Brute-force truth in the finite model {0,..,size-1} with real equality.

    Agrees with qe_decide whenever size exceeds the quantifier rank; used
    as the independent route, never as the decision procedure.
    """
    if size < 1:
        raise ValueError("model size must be >= 1")
    if free_vars(f):
        raise ScopeError(f"not a sentence: free variables {sorted(free_vars(f))}")
    return _truth_finite(expand(f), {}, size)


def _truth_finite(f: Formula, env: dict[str, int], size: int) -> bool:
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _truth_finite(f.sub, env, size)
    if isinstance(f, And):
        return _truth_finite(f.left, env, size) and _truth_finite(f.right, env, size)
    if isinstance(f, Or):
        return _truth_finite(f.left, env, size) or _truth_finite(f.right, env, size)
    if isinstance(f, Implies):
        return not _truth_finite(f.left, env, size) or _truth_finite(f.right, env, size)
    if isinstance(f, (Exists, Forall)):
        results = (
            _truth_finite(f.body, dict(env, **{f.var: c}), size) for c in range(size)
        )
        return any(results) if isinstance(f, Exists) else all(results)
    raise TypeError(f"not a core formula: {f!r}")
