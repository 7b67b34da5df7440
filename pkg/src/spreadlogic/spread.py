"""Spread laws over finite sequences, with depth-truncated analysis.

A spread law accepts or rejects finite sequences; the accepted prefix-closed
tree carves out a set of infinite paths. Everything here is parameterized by
a depth and a branch bound, so each check runs on a finite truncation of that
tree. Laws come in three flavors: builtin parametric families, finite tables
of accepted codes, and caller-supplied predicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import NotInjectiveToDepth, PreconditionFailed, RootRejected, SearchExhausted
from .points import Point
from .seqcore import FinSeq, is_prefix

DEFAULT_DEPTH = 12
DEFAULT_BRANCH_BOUND = 12
DEFAULT_RANK_CAP = 8

# Work budget for scans below rejected nodes of opaque predicate laws.
_SCAN_BUDGET = 200_000


def toy_accepts(n: int, s: tuple[int, ...]) -> bool:
    # Prefixes of the members: nondecreasing with entries < n. For n=0 only
    # the empty sequence passes, leaving an empty path set.
    return all(x < n for x in s) and all(a <= b for a, b in zip(s, s[1:]))


@dataclass(frozen=True)
class SpreadLaw:
    kind: str
    family: str = ""
    args: tuple[int, ...] = ()
    accept_codes: frozenset[int] = frozenset()
    default: str = "reject-extensions"
    predicate: Callable[[tuple[int, ...]], bool] | None = field(
        default=None, compare=False
    )
    label: str = ""
    # True when rejection is monotone by construction, so no rejected node
    # can have an accepted extension and validation may skip scanning there.
    hereditary: bool = False
    # Optional key on accepted nodes with the guarantee that nodes sharing a
    # key admit exactly the same accepted extensions. Rank analysis then
    # shares subtree work between such nodes; None disables sharing.
    suffix_key: Callable[[tuple[int, ...]], object] | None = field(
        default=None, compare=False
    )

    def accepts(self, s) -> bool:
        items = s.items if isinstance(s, FinSeq) else tuple(s)
        if self.kind == "builtin":
            if self.family == "baire":
                return True
            if self.family == "constant":
                return all(x == self.args[0] for x in items)
            if self.family == "toy":
                return toy_accepts(self.args[0], items)
            raise ValueError(f"unknown builtin family {self.family!r}")
        if self.kind == "table":
            return FinSeq(items).code in self.accept_codes
        return self.predicate(items)

    def to_json(self) -> dict:
        if self.kind == "builtin":
            out = {"kind": "builtin", "family": self.family}
            if self.family == "toy":
                out["n"] = self.args[0]
            elif self.family == "constant":
                out["value"] = self.args[0]
            return out
        if self.kind == "table":
            return {
                "kind": "table",
                "accept": sorted(self.accept_codes),
                "default": self.default,
            }
        raise ValueError("predicate laws have no JSON form")

    @classmethod
    def from_json(cls, obj: dict) -> "SpreadLaw":
        kind = obj.get("kind")
        if kind == "builtin":
            family = obj.get("family")
            if family == "toy":
                return toy_law(int(obj["n"]))
            if family == "constant":
                return constant_law(int(obj["value"]))
            if family == "baire":
                return baire_law()
            raise ValueError(f"unknown builtin family {family!r}")
        if kind == "table":
            default = obj.get("default", "reject-extensions")
            if default != "reject-extensions":
                raise ValueError(f"unknown table default {default!r}")
            return table_law_from_codes(obj["accept"])
        raise ValueError(f"unknown law kind {kind!r}")


def toy_law(n: int) -> SpreadLaw:
    if n < 0:
        raise ValueError("toy family needs n >= 0")
    return SpreadLaw(
        "builtin",
        family="toy",
        args=(n,),
        label=f"toy({n})",
        hereditary=True,
        # Extensions of a nondecreasing prefix depend only on its last value.
        suffix_key=lambda s: s[-1] if s else 0,
    )


def constant_law(value: int) -> SpreadLaw:
    return SpreadLaw(
        "builtin",
        family="constant",
        args=(value,),
        label=f"constant({value})",
        hereditary=True,
        suffix_key=lambda s: 0,
    )


def baire_law() -> SpreadLaw:
    return SpreadLaw(
        "builtin", family="baire", label="baire", hereditary=True, suffix_key=lambda s: 0
    )


def table_law(sequences) -> SpreadLaw:
    codes = frozenset(FinSeq(tuple(s)).code for s in sequences)
    return SpreadLaw("table", accept_codes=codes, label="table")


def table_law_from_codes(codes) -> SpreadLaw:
    return SpreadLaw("table", accept_codes=frozenset(int(c) for c in codes), label="table")


def predicate_law(
    fn, label: str = "predicate", hereditary: bool = False, suffix_key=None
) -> SpreadLaw:
    return SpreadLaw(
        "predicate", predicate=fn, label=label, hereditary=hereditary, suffix_key=suffix_key
    )


@dataclass(frozen=True)
class ValidationReport:
    depth: int
    branch_bound: int
    # Accepted nodes of length < depth with no accepted child within the
    # branch bound.
    childless: tuple[FinSeq, ...]
    # Rejected nodes that nevertheless have an accepted extension, each with
    # one witnessing extension.
    nonmonotone: tuple[tuple[FinSeq, FinSeq], ...]
    # False when an opaque predicate law exhausted the scan budget below its
    # rejected nodes, so absence of nonmonotone entries is not conclusive.
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not self.childless and not self.nonmonotone

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "depth": self.depth,
            "branch_bound": self.branch_bound,
            "childless": [list(s) for s in self.childless],
            "nonmonotone": [
                {"rejected": list(s), "accepted_extension": list(t)}
                for s, t in self.nonmonotone
            ],
            "exhaustive": self.exhaustive,
        }


def _accepted_children(law: SpreadLaw, s: tuple[int, ...], bound: int):
    return [n for n in range(bound + 1) if law.accepts(s + (n,))]


def validate_spread_law(
    law: SpreadLaw,
    depth: int = DEFAULT_DEPTH,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> ValidationReport:
    """Check the two halves of the spread condition on the truncation.

    An accepted node must have an accepted child; a rejected node must not
    have an accepted extension. Violations are returned as data, not raised.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    childless: list[FinSeq] = []
    nonmonotone: list[tuple[FinSeq, FinSeq]] = []
    rejected_frontier: list[tuple[int, ...]] = []

    if law.kind == "table":
        # The accepted set is exactly the listed codes, so both halves are
        # checked over it directly; a DFS from the root would miss accepted
        # nodes stranded behind a rejected prefix.
        in_universe = []
        for code in sorted(law.accept_codes):
            seq = FinSeq.from_code(code)
            if len(seq) <= depth and all(x <= branch_bound for x in seq):
                in_universe.append(seq)
        for seq in in_universe:
            if len(seq) < depth and not _accepted_children(law, seq.items, branch_bound):
                childless.append(seq)
        found: dict[tuple[int, ...], FinSeq] = {}
        for seq in in_universe:
            for k in range(len(seq)):
                prefix = seq.items[:k]
                if prefix not in found and not law.accepts(prefix):
                    found[prefix] = seq
        nonmonotone.extend((FinSeq(p), w) for p, w in sorted(found.items()))
        return ValidationReport(
            depth, branch_bound, tuple(childless), tuple(nonmonotone), True
        )

    if law.accepts(()):
        stack = [()]
        while stack:
            s = stack.pop()
            if len(s) >= depth:
                continue
            kids = _accepted_children(law, s, branch_bound)
            if not kids:
                childless.append(FinSeq(s))
            stack.extend(s + (n,) for n in reversed(kids))
            rejected_frontier.extend(
                s + (n,) for n in range(branch_bound + 1) if not law.accepts(s + (n,))
            )
    else:
        rejected_frontier.append(())

    exhaustive = True
    if not law.hereditary:
        budget = _SCAN_BUDGET
        for start in rejected_frontier:
            stack = [start]
            while stack and budget > 0:
                s = stack.pop()
                budget -= 1
                if law.accepts(s):
                    nonmonotone.append((FinSeq(start), FinSeq(s)))
                    break
                if len(s) < depth:
                    stack.extend(s + (n,) for n in range(branch_bound + 1))
            if budget <= 0:
                exhaustive = False
                break

    return ValidationReport(
        depth, branch_bound, tuple(childless), tuple(nonmonotone), exhaustive
    )


def leftmost_inhabitant(
    law: SpreadLaw, length: int, branch_bound: int = DEFAULT_BRANCH_BOUND
) -> FinSeq:
    """Prefix of the leftmost path: always take the least accepted child."""
    if not law.accepts(()):
        raise RootRejected("the empty sequence is rejected, the spread is empty")
    s: tuple[int, ...] = ()
    while len(s) < length:
        for n in range(branch_bound + 1):
            if law.accepts(s + (n,)):
                s = s + (n,)
                break
        else:
            raise SearchExhausted(
                f"no accepted child of {list(s)} within bound {branch_bound}"
            )
    return FinSeq(s)


def retract(
    law: SpreadLaw,
    x: Point,
    depth: int = DEFAULT_DEPTH,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> FinSeq:
    """Push the truncation of x into the accepted tree.

    Each value of x is kept when acceptable and otherwise replaced by the
    least accepted alternative. Members are fixed, and deeper runs extend
    shallower ones.
    """
    if not law.accepts(()):
        raise RootRejected("the empty sequence is rejected, the spread is empty")
    s: tuple[int, ...] = ()
    for i in range(depth):
        v = x.at(i)
        if law.accepts(s + (v,)):
            s = s + (v,)
            continue
        for n in range(branch_bound + 1):
            if law.accepts(s + (n,)):
                s = s + (n,)
                break
        else:
            raise SearchExhausted(
                f"no accepted child of {list(s)} within bound {branch_bound}"
            )
    return FinSeq(s)


def is_fan_to_depth(
    law: SpreadLaw,
    depth: int,
    bound_fn: Callable[[FinSeq], int],
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> bool:
    """Whether every accepted child index stays within bound_fn of its node.

    Child indices are scanned up to branch_bound, so a violation beyond both
    bound_fn(node) and branch_bound is invisible at this truncation.
    """
    stack: list[tuple[int, ...]] = [()] if law.accepts(()) else []
    while stack:
        s = stack.pop()
        if len(s) >= depth:
            continue
        bound = bound_fn(FinSeq(s))
        for n in range(branch_bound + 1):
            if law.accepts(s + (n,)):
                if n > bound:
                    return False
                stack.append(s + (n,))
    return True


@dataclass(frozen=True)
class RankProfile:
    """Derivative structure of the truncated tree.

    Ranks are computed bottom-up: a node whose subtree is a single path has
    rank 0; otherwise the rank is the maximal child rank m, bumped to m+1
    when at least two children attain m. Since deeper truncations can only
    reveal more branching, every reported rank is a floor for the untruncated
    value. components[m] counts the maximal rank-m nodes: those of rank m
    whose parent has strictly larger rank. The root also counts, but only
    when its rank is inherited from a unique maximal child (or it is a single
    path): a tie-bump at the root describes disjoint pieces below it, not a
    path through it.
    """

    root_rank: int
    components: dict[int, int]
    depth: int
    branch_bound: int
    rank_cap: int
    cap_reached: bool = False

    def to_json(self) -> dict:
        return {
            "root_rank": self.root_rank,
            "components": {str(k): v for k, v in sorted(self.components.items())},
            "depth": self.depth,
            "branch_bound": self.branch_bound,
            "rank_cap": self.rank_cap,
            "cap_reached": self.cap_reached,
        }


def subtree_rank_data(
    law: SpreadLaw,
    node: tuple[int, ...],
    depth: int,
    branch_bound: int,
    rank_cap: int,
) -> tuple[int, bool, dict[int, int], bool, int]:
    """Rank analysis of the subtree at an accepted node.

    Returns the node's rank, whether that rank came from a tie-bump, per
    rank value the count of maximal nodes strictly below the node, whether
    the cap was hit anywhere, and the count of full-depth nodes in the
    subtree. Depth counts from the root.
    """
    key_fn = law.suffix_key
    # Shared-subtree cache: nodes with equal suffix key and equal remaining
    # depth have identical analyses. Cached dicts are read-only from here on.
    memo: dict[tuple[object, int], tuple[int, bool, dict[int, int], int, bool]] = {}

    def rank(s: tuple[int, ...]) -> tuple[int, bool, dict[int, int], int, bool]:
        left = depth - len(s)
        if left <= 0:
            return 0, False, {}, 1, False
        mk = None
        if key_fn is not None:
            mk = (key_fn(s), left)
            hit = memo.get(mk)
            if hit is not None:
                return hit
        kids = _accepted_children(law, s, branch_bound)
        if not kids:
            out = (0, False, {}, 0, False)
        else:
            child = [rank(s + (n,)) for n in kids]
            top = max(r for r, _, _, _, _ in child)
            ties = sum(1 for r, _, _, _, _ in child if r == top)
            bumped = ties >= 2
            r = top + 1 if bumped else top
            capped = r >= rank_cap
            if capped:
                r = rank_cap
            below: dict[int, int] = {}
            leaves = 0
            for cr, _, ccounts, cleaves, ccap in child:
                leaves += cleaves
                capped = capped or ccap
                for k, v in ccounts.items():
                    below[k] = below.get(k, 0) + v
                if cr < r:
                    below[cr] = below.get(cr, 0) + 1
            out = (r, bumped, below, leaves, capped)
        if mk is not None:
            memo[mk] = out
        return out

    r, bumped, below, leaves, capped = rank(tuple(node))
    return r, bumped, dict(below), capped, leaves


def cb_rank_profile(
    law: SpreadLaw,
    depth: int = DEFAULT_DEPTH,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> RankProfile:
    if not law.accepts(()):
        return RankProfile(0, {}, depth, branch_bound, rank_cap, False)
    root_rank, root_bumped, below, cap_reached, _ = subtree_rank_data(
        law, (), depth, branch_bound, rank_cap
    )
    components = dict(below)
    if not root_bumped:
        components[root_rank] = components.get(root_rank, 0) + 1
    return RankProfile(root_rank, components, depth, branch_bound, rank_cap, cap_reached)


def count_depth_nodes(
    law: SpreadLaw,
    depth: int,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
    node: tuple[int, ...] = (),
) -> int:
    """Number of accepted nodes at exactly the given depth below a node.

    Depth counts from the root. Distinct depth-d nodes extend to distinct
    paths, so this is a lower bound on the number of members, exact once
    members separate within the truncation.
    """
    count = 0
    start = tuple(node)
    stack: list[tuple[int, ...]] = [start] if law.accepts(start) else []
    while stack:
        s = stack.pop()
        if len(s) >= depth:
            count += 1
            continue
        stack.extend(s + (n,) for n in _accepted_children(law, s, branch_bound))
    return count


def enumerate_decidable(
    law: SpreadLaw,
    code: list[tuple[FinSeq, int]],
    depth: int = DEFAULT_DEPTH,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> list[Point]:
    """Turn a prefix code for an enumerable spread into its list of points.

    Each coded prefix must isolate a single path down to the given depth;
    the emitted point follows that path and then repeats its last value.
    Results come back ordered by the assigned index.
    """
    seen: dict[int, FinSeq] = {}
    prefixes: list[tuple[int, FinSeq]] = []
    for s, idx in code:
        s = s if isinstance(s, FinSeq) else FinSeq(tuple(s))
        if idx in seen:
            raise NotInjectiveToDepth(
                f"index {idx} assigned to both {list(seen[idx])} and {list(s)}"
            )
        seen[idx] = s
        prefixes.append((idx, s))
    for i, (_, a) in enumerate(prefixes):
        for _, b in prefixes[i + 1 :]:
            if is_prefix(a, b) or is_prefix(b, a):
                raise NotInjectiveToDepth(
                    f"coded prefixes {list(a)} and {list(b)} lie on one path"
                )

    out: list[tuple[int, Point]] = []
    for idx, s in sorted(prefixes, key=lambda p: p[0]):
        if not law.accepts(s):
            raise PreconditionFailed(f"coded prefix {list(s)} is rejected")
        walk = s.items
        while len(walk) < depth:
            kids = _accepted_children(law, walk, branch_bound)
            if len(kids) >= 2:
                raise NotInjectiveToDepth(
                    f"two points below coded prefix {list(s)} separate at "
                    f"{list(walk)}"
                )
            if not kids:
                break
            walk = walk + (kids[0],)
        last = walk[-1] if walk else 0
        out.append((idx, Point(walk, (last,))))
    return [p for _, p in out]
