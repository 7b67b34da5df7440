"""Tree-truncation oracle for the recognized sentence families.

Verdicts are read off rank profiles of the truncated accepted tree, with no
use of the closed-form characterizations: the count of maximal rank-p nodes
stands in for the count of points surviving p pruning rounds, and the count
of full-depth nodes stands in for the member count. Each readout is taken
at three truncations: the requested one, one level shallower, and one
branch wider (stepped by the descriptor's period, so periodic component
patterns repeat). A count that agrees across all three is treated as exact;
a count still growing is treated as unbounded only where that is safe, and
everything else raises DepthInsufficient rather than guessing.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from ..errors import DepthInsufficient
from ..points import Point
from ..seqcore import StrictIncSeq
from ..spread import (
    DEFAULT_BRANCH_BOUND,
    DEFAULT_DEPTH,
    DEFAULT_RANK_CAP,
    _accepted_children,
    count_depth_nodes,
    subtree_rank_data,
)
from ..toyspread import (
    ClosureFan,
    FiniteSum,
    OmegaProduct,
    Product,
    SeqSum,
    SumDescriptor,
    Toy,
    branch_bound_for,
    descriptor_from_json,
    descriptor_to_json,
    law_for,
)
from .evaluate import HOLDS, NEG_HOLDS, Verdict, _verdict_and, _verdict_implies, _verdict_not, _verdict_or
from .formulas import And, Formula, Implies, Not, Or, free_vars, recognize

__all__ = ["oracle_evaluate", "oracle_profile"]

_CACHE: dict = {}
_CACHE_LIMIT = 4096


def _growth_step(s: SumDescriptor, bb: int) -> int:
    # Zero means widening cannot add children anywhere, so the probe at a
    # wider bound would retraverse the identical tree.
    if isinstance(s, (Toy, Product, FiniteSum)) and bb >= branch_bound_for(s, 0):
        return 0
    if isinstance(s, SeqSum):
        if isinstance(s.alpha, StrictIncSeq):
            return max(len(s.alpha.period_increments), 1)
        return max(len(s.alpha.period), 1)
    if isinstance(s, ClosureFan):
        return max(len(s.alpha.period), 1)
    return 1


def _widening_repeats(s: SumDescriptor, bb: int, step: int) -> bool:
    # Growth under widening certifies an unbounded count only when every
    # component the step reveals copies the value one step below it: the
    # subtree analysis of a root child depends only on its value and the
    # remaining depth, so the same increment then recurs forever.
    if step <= 0 or step > bb + 1:
        return False
    if isinstance(s, OmegaProduct):
        return True
    if isinstance(s, SeqSum):
        value_at = (
            s.alpha.value_at if isinstance(s.alpha, StrictIncSeq) else s.alpha.at
        )
        return all(
            value_at(i) == value_at(i - step) for i in range(bb + 1, bb + step + 1)
        )
    return False


def _subtree_task(args):
    dj, child, depth, bb, cap = args
    law = law_for(descriptor_from_json(dj))
    rank, _, below, cap_hit, leaves = subtree_rank_data(law, (child,), depth, bb, cap)
    return child, rank, below, cap_hit, leaves


def oracle_profile(
    s: SumDescriptor, depth: int, branch_bound: int, rank_cap: int, jobs: int = 1
) -> tuple[dict[int, int], int, int, bool]:
    """(components, leaves, root_rank, cap_reached) of the truncated tree.

    With jobs > 1 the subtrees under the root children are analyzed in
    parallel and merged in child order, reproducing the serial result.
    """
    key = (s, depth, branch_bound, rank_cap)
    if key in _CACHE:
        return _CACHE[key]
    law = law_for(s)
    if not law.accepts(()):
        result = ({}, 0, 0, False)
    else:
        kids = _accepted_children(law, (), branch_bound) if depth >= 1 else []
        if not kids:
            leaves = count_depth_nodes(law, depth, branch_bound)
            result = ({0: 1} if leaves else {}, leaves, 0, False)
        else:
            if jobs > 1:
                dj = descriptor_to_json(s)
                tasks = [(dj, c, depth, branch_bound, rank_cap) for c in kids]
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    data = sorted(pool.map(_subtree_task, tasks))
            else:
                data = []
                for c in kids:
                    rank, _, below, cap_hit, leaves = subtree_rank_data(
                        law, (c,), depth, branch_bound, rank_cap
                    )
                    data.append((c, rank, below, cap_hit, leaves))
            top = max(r for _, r, _, _, _ in data)
            ties = sum(1 for _, r, _, _, _ in data if r == top)
            bumped = ties >= 2
            root_rank = top + 1 if bumped else top
            cap_reached = any(hit for _, _, _, hit, _ in data)
            if root_rank >= rank_cap:
                cap_reached = True
                root_rank = rank_cap
            components: dict[int, int] = {}
            for _, rank, below, _, _ in data:
                for k, v in below.items():
                    components[k] = components.get(k, 0) + v
                if rank < root_rank:
                    components[rank] = components.get(rank, 0) + 1
            if not bumped:
                components[root_rank] = components.get(root_rank, 0) + 1
            leaves = sum(lv for _, _, _, _, lv in data)
            if leaves == 0:
                components = {}
            result = (components, leaves, root_rank, cap_reached)
    if len(_CACHE) >= _CACHE_LIMIT:
        _CACHE.clear()
    _CACHE[key] = result
    return result


def _widened_growth(counts: list[int], repeats: bool) -> bool:
    # counts[2], when present, is the same depth one widening step out.
    return repeats and len(counts) == 3 and counts[2] > counts[0]


def _resolve_ge(counts: list[int], q: int, what: str, repeats: bool) -> bool:
    if all(c >= q for c in counts):
        return True
    if _widened_growth(counts, repeats):
        return True
    if len(set(counts)) == 1:
        return False
    raise DepthInsufficient(
        f"{what} counts {counts} have not settled against threshold {q}"
    )


def _resolve_eq(counts: list[int], q: int, what: str, repeats: bool) -> bool:
    if _widened_growth(counts, repeats):
        return False
    if len(set(counts)) == 1:
        return counts[0] == q
    if all(c > q for c in counts):
        return False
    raise DepthInsufficient(
        f"{what} counts {counts} have not settled against target {q}"
    )


def _family_verdict(rec, profiles, repeats: bool) -> Verdict:
    name, params, args = rec
    if args:
        return Verdict.unsupported("open formulas have no structure verdict")
    rank_counts = lambda p: [comp.get(p, 0) for comp, _, _, _ in profiles]
    leaf_counts = [leaves for _, leaves, _, _ in profiles]
    if name == "psi":
        p, q = params if len(params) == 2 else (params[0], 1)
        return Verdict.of(_resolve_ge(rank_counts(p), q, f"rank-{p}", repeats))
    if name == "rho":
        p, q = params if len(params) == 2 else (params[0], 1)
        return Verdict.of(_resolve_eq(rank_counts(p), q, f"rank-{p}", repeats))
    if name == "psi_card":
        return Verdict.of(_resolve_ge(leaf_counts, params[0] + 1, "member", repeats))
    if name == "dec_eq":
        # Decidable equality means no limit points: no maximal node of
        # positive rank. A bumped root is already excluded from the counts,
        # so disjoint unions of isolated points pass.
        answers = [
            all(r == 0 for r in comp) for comp, _, _, _ in profiles
        ]
        if len(set(answers)) != 1:
            raise DepthInsufficient(
                "presence of branching nodes has not settled across truncations"
            )
        return Verdict.of(answers[0])
    if name == "stable_eq":
        return HOLDS
    return Verdict.unsupported(f"family {name} has no oracle readout")


def _readout(f: Formula, profiles, repeats: bool) -> Verdict:
    rec = recognize(f)
    if rec is not None:
        return _family_verdict(rec, profiles, repeats)
    if isinstance(f, Not):
        return _verdict_not(_readout(f.sub, profiles, repeats))
    if isinstance(f, And):
        return _verdict_and(
            _readout(f.left, profiles, repeats), _readout(f.right, profiles, repeats)
        )
    if isinstance(f, Or):
        return _verdict_or(
            _readout(f.left, profiles, repeats), _readout(f.right, profiles, repeats)
        )
    if isinstance(f, Implies):
        return _verdict_implies(
            _readout(f.left, profiles, repeats), _readout(f.right, profiles, repeats)
        )
    return Verdict.unsupported("not a recognized family instance")


def oracle_evaluate(
    f: Formula,
    s: SumDescriptor,
    depth: int = DEFAULT_DEPTH,
    branch_bound: int | None = None,
    rank_cap: int = DEFAULT_RANK_CAP,
    jobs: int = 1,
) -> Verdict:
    """Evaluate a recognized family instance from tree truncations alone."""
    if depth < 2:
        raise ValueError("oracle evaluation needs depth >= 2")
    if free_vars(f):
        return Verdict.unsupported("formula has free variables")
    bb = branch_bound if branch_bound is not None else branch_bound_for(
        s, DEFAULT_BRANCH_BOUND
    )
    step = _growth_step(s, bb)
    configs = [(depth, bb), (depth - 1, bb)]
    if step:
        configs.append((depth, bb + step))
    profiles = [
        oracle_profile(s, d, b, rank_cap, jobs=jobs) for d, b in configs
    ]
    for comp, _, root_rank, cap_reached in profiles:
        if cap_reached:
            raise DepthInsufficient(
                f"rank cap {rank_cap} reached; counts above it are untrustworthy"
            )
    return _readout(f, profiles, _widening_repeats(s, bb, step))
