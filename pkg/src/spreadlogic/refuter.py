"""Executable counterexamples against uniform-modulus claims.

Each operation here plays against a claimed modulus, or against a prover
strategy that supplies one per queried claim instance, and produces a
transcript: the moduli consumed, the counterexample points built from
them, and the arithmetic checks performed, ending in exactly one failed
check. Transcripts are self-contained; verification re-executes every
check from the recorded data and replays the whole construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import MalformedTranscript, StrategyIncomplete
from .points import Point, ZERO, difference_positions, eventually_equal, first_difference
from .seqcore import first
from .vitali import (
    Base,
    Modulus,
    RelExpr,
    _fan_accepts,
    estar_normal_form,
    format_rel,
    parse_rel,
)

__all__ = [
    "ApartnessBranch",
    "Check",
    "DecisionBranch",
    "ProverStrategy",
    "Transcript",
    "TranscriptStep",
    "refute_apartness",
    "refute_decidability_on_omega_class",
    "refute_equality_decidability",
    "refute_fin_containment",
    "refute_omega_stability",
    "refute_tower_collapse",
    "refute_vitali_stability",
    "verify_transcript",
]

TRANSCRIPT_SCHEMA = "transcript/1"


class DecisionBranch(enum.Enum):
    ALL_EQUAL = "all-equal"
    ALL_APART = "all-apart"


class ApartnessBranch(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class ProverStrategy:
    """Answers claim-instance queries with moduli.

    Scripts are tag-to-pair tables with an optional "default" row; a query
    missing from the table falls back to it, and StrategyIncomplete is
    raised when neither is present. Callbacks may compute answers instead.
    """

    def __init__(self, fn: Callable[[str], Modulus | tuple[int, int] | None]):
        self._fn = fn

    @classmethod
    def from_script(cls, table: dict) -> "ProverStrategy":
        rows = {}
        for tag, pair_ in table.items():
            p, n = pair_
            rows[str(tag)] = Modulus(int(p), int(n))

        def lookup(tag: str):
            return rows.get(tag, rows.get("default"))

        return cls(lookup)

    @classmethod
    def from_callback(cls, fn) -> "ProverStrategy":
        return cls(fn)

    def ask(self, tag: str) -> Modulus:
        try:
            answer = self._fn(tag)
        except (KeyError, IndexError):
            answer = None
        if answer is None:
            raise StrategyIncomplete(f"no modulus supplied for query {tag!r}")
        if not isinstance(answer, Modulus):
            p, n = answer
            answer = Modulus(int(p), int(n))
        return answer


# ---------------------------------------------------------------------------
# Transcripts


@dataclass(frozen=True)
class Check:
    kind: str
    params: dict
    expect: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expect == self.got

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "expect": self.expect,
            "got": self.got,
        }

    @classmethod
    def from_json(cls, obj) -> "Check":
        if not isinstance(obj, dict):
            raise MalformedTranscript("check entries must be objects")
        for key in ("kind", "params", "expect", "got"):
            if key not in obj:
                raise MalformedTranscript(f"check is missing {key!r}")
        if not isinstance(obj["params"], dict):
            raise MalformedTranscript("check params must be an object")
        return cls(str(obj["kind"]), dict(obj["params"]), obj["expect"], obj["got"])


@dataclass(frozen=True)
class TranscriptStep:
    tag: str | None
    modulus: Modulus | None
    derived: dict
    point: Point | None
    checks: tuple[Check, ...]

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "modulus": None if self.modulus is None else self.modulus.to_json(),
            "derived": dict(self.derived),
            "point": None if self.point is None else self.point.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }

    @classmethod
    def from_json(cls, obj) -> "TranscriptStep":
        if not isinstance(obj, dict):
            raise MalformedTranscript("steps must be objects")
        for key in ("tag", "modulus", "derived", "point", "checks"):
            if key not in obj:
                raise MalformedTranscript(f"step is missing {key!r}")
        if not isinstance(obj["derived"], dict):
            raise MalformedTranscript("step derived data must be an object")
        if not isinstance(obj["checks"], list) or not obj["checks"]:
            raise MalformedTranscript("step checks must be a nonempty list")
        try:
            modulus = None if obj["modulus"] is None else Modulus.from_json(obj["modulus"])
            point = None if obj["point"] is None else Point.from_json(obj["point"])
        except (TypeError, KeyError, ValueError) as exc:
            raise MalformedTranscript(f"bad step data: {exc}") from exc
        tag = obj["tag"]
        return cls(
            None if tag is None else str(tag),
            modulus,
            dict(obj["derived"]),
            point,
            tuple(Check.from_json(c) for c in obj["checks"]),
        )


@dataclass(frozen=True)
class Transcript:
    op: str
    inputs: dict
    steps: tuple[TranscriptStep, ...]
    outcome: str = "contradiction"

    def to_json(self) -> dict:
        return {
            "schema": TRANSCRIPT_SCHEMA,
            "op": self.op,
            "inputs": dict(self.inputs),
            "steps": [s.to_json() for s in self.steps],
            "outcome": self.outcome,
        }

    @classmethod
    def from_json(cls, obj) -> "Transcript":
        if not isinstance(obj, dict):
            raise MalformedTranscript("transcript must be an object")
        if obj.get("schema") != TRANSCRIPT_SCHEMA:
            raise MalformedTranscript(f"unknown schema {obj.get('schema')!r}")
        for key in ("op", "inputs", "steps", "outcome"):
            if key not in obj:
                raise MalformedTranscript(f"transcript is missing {key!r}")
        if not isinstance(obj["inputs"], dict):
            raise MalformedTranscript("transcript inputs must be an object")
        if not isinstance(obj["steps"], list) or not obj["steps"]:
            raise MalformedTranscript("transcript steps must be a nonempty list")
        return cls(
            str(obj["op"]),
            dict(obj["inputs"]),
            tuple(TranscriptStep.from_json(s) for s in obj["steps"]),
            str(obj["outcome"]),
        )


def _bumped(gamma: Point, m: int) -> Point:
    return gamma.set_at(m, gamma.at(m) + 1)


def _diff_window(a: Point, b: Point) -> int:
    return max(len(a.pre), len(b.pre)) + math.lcm(len(a.period), len(b.period))


def _prefix_check(point: Point, other: Point, upto: int, label: str) -> Check:
    got = list(point.bar(upto)) == list(other.bar(upto))
    return Check("prefix-agrees", {"upto": upto, "with": label}, True, got)


def _diff_bound_check(point: Point, other: Point, k: int, label: str) -> Check:
    window = _diff_window(point, other)
    got = len(difference_positions(point, other, window)) <= k
    return Check(
        "difference-count-at-most",
        {"k": k, "with": label, "window": window},
        True,
        got,
    )


# ---------------------------------------------------------------------------
# Refutations against a single claimed modulus


def refute_equality_decidability(m: Modulus, branch: DecisionBranch) -> Transcript:
    """Against a decision of equality with the zero sequence, uniform on a
    prefix of the claimed length: the all-equal branch is defeated by
    bumping one value just past that prefix, the all-apart branch by the
    zero sequence itself."""
    alpha = ZERO
    p = m.p
    if branch is DecisionBranch.ALL_EQUAL:
        beta = _bumped(alpha, p)
        checks = (
            _prefix_check(beta, alpha, p, "alpha"),
            Check("points-equal", {"with": "alpha"}, True, first_difference(beta, alpha) is None),
        )
    else:
        beta = alpha
        checks = (
            _prefix_check(beta, alpha, p, "alpha"),
            Check("points-differ", {"with": "alpha"}, True, first_difference(beta, alpha) is not None),
        )
    step = TranscriptStep(None, m, {"difference-at": p}, beta, checks)
    return Transcript(
        "equality-decidability",
        {"modulus": m.to_json(), "branch": branch.value},
        (step,),
    )


def refute_vitali_stability(gamma: Point, m: Modulus) -> Transcript:
    """Against a uniform tail-agreement modulus for the one-difference
    neighborhood of gamma: place the single difference past both the
    claimed prefix and the claimed bound."""
    mm = max(m.p, m.n + 1)
    alpha = _bumped(gamma, mm)
    checks = (
        _diff_bound_check(alpha, gamma, 1, "gamma"),
        _prefix_check(alpha, gamma, m.p, "gamma"),
        Check("exceeds-bound", {"value": mm, "bound": m.n}, True, mm > m.n),
        Check(
            "tail-agrees-beyond",
            {"at": mm, "bound": m.n, "with": "gamma"},
            True,
            alpha.at(mm) == gamma.at(mm),
        ),
    )
    step = TranscriptStep(None, m, {"difference-at": mm}, alpha, checks)
    return Transcript(
        "vitali-stability",
        {"gamma": gamma.to_json(), "modulus": m.to_json()},
        (step,),
    )


def refute_apartness(
    a: Point, b: Point, m: Modulus, branch: ApartnessBranch
) -> Transcript:
    """Against a uniform two-way apartness decision on extensions of a
    prefix of the first point: the first branch fails on that point
    itself, the second on the hybrid that follows it up to the prefix and
    the second point afterwards."""
    p = m.p
    if branch is ApartnessBranch.FIRST:
        gamma = a
        final = Check(
            "base-relation-fails",
            {"with": "a"},
            True,
            not eventually_equal(gamma, a),
        )
    else:
        gamma = b.shift(p).with_prefix(a.bar(p))
        final = Check(
            "base-relation-fails",
            {"with": "b"},
            True,
            not eventually_equal(gamma, b),
        )
    checks = (_prefix_check(gamma, a, p, "a"), final)
    step = TranscriptStep(None, m, {"hybrid-from": p}, gamma, checks)
    return Transcript(
        "apartness",
        {
            "a": a.to_json(),
            "b": b.to_json(),
            "modulus": m.to_json(),
            "branch": branch.value,
        },
        (step,),
    )


def refute_decidability_on_omega_class(
    gamma: Point, m: Modulus, branch: DecisionBranch
) -> Transcript:
    """Against a uniform equality decision on the one-difference
    neighborhood of gamma: the all-equal branch is defeated by the point
    with its single difference at the claimed prefix length, the all-apart
    branch by gamma itself."""
    p = m.p
    if branch is DecisionBranch.ALL_EQUAL:
        alpha = _bumped(gamma, p)
        final = Check(
            "points-equal",
            {"with": "gamma"},
            True,
            first_difference(alpha, gamma) is None,
        )
    else:
        alpha = gamma
        final = Check(
            "points-differ",
            {"with": "gamma"},
            True,
            first_difference(alpha, gamma) is not None,
        )
    checks = (
        _diff_bound_check(alpha, gamma, 1, "gamma"),
        _prefix_check(alpha, gamma, p, "gamma"),
        final,
    )
    step = TranscriptStep(None, m, {"difference-at": p}, alpha, checks)
    return Transcript(
        "decidability-on-omega-class",
        {"gamma": gamma.to_json(), "modulus": m.to_json(), "branch": branch.value},
        (step,),
    )


# ---------------------------------------------------------------------------
# Strategy-driven refutations


def _tower_descent(
    gamma: Point, strategy: ProverStrategy, top: int, floor: int
) -> list[TranscriptStep]:
    """Peel tower levels from top down to zero.

    At each level the strategy claims a prefix and a tail bound; the
    counterexample point differs from gamma exactly once, past the claimed
    prefix, past the claimed bound, past the enclosing prefix constraint,
    and past the previous level's difference. At positive levels that
    difference triggers the next level down; at level zero it lands beyond
    a claimed agreement bound, which is the contradiction.
    """
    steps = []
    prev = floor - 1
    for h in range(top, -1, -1):
        mod = strategy.ask(f"tower:{h}")
        mh = max(mod.p, mod.n + 1, floor, prev + 1)
        alpha = _bumped(gamma, mh)
        checks = [
            _diff_bound_check(alpha, gamma, 1, "gamma"),
            _prefix_check(alpha, gamma, mod.p, "gamma"),
            Check("exceeds-bound", {"value": mh, "bound": mod.n}, True, mh > mod.n),
        ]
        if h > 0:
            checks.append(
                Check(
                    "values-differ-at",
                    {"at": mh, "with": "gamma"},
                    True,
                    alpha.at(mh) != gamma.at(mh),
                )
            )
            derived = {"difference-at": mh, "descends-to": h - 1}
        else:
            checks.append(
                Check(
                    "tail-agrees-beyond",
                    {"at": mh, "bound": mod.n, "with": "gamma"},
                    True,
                    alpha.at(mh) == gamma.at(mh),
                )
            )
            derived = {"difference-at": mh}
        steps.append(
            TranscriptStep(f"tower:{h}", mod, derived, alpha, tuple(checks))
        )
        prev = mh
    return steps


def refute_tower_collapse(
    gamma: Point, i: int, strategy: ProverStrategy
) -> Transcript:
    """Against the collapse of tower level i+1 onto level i over the
    neighborhood of gamma, descending one claimed modulus per level."""
    if i < 0:
        raise ValueError("tower level must be a natural number")
    steps = _tower_descent(gamma, strategy, i + 1, 0)
    return Transcript(
        "tower-collapse", {"gamma": gamma.to_json(), "i": i}, tuple(steps)
    )


def refute_omega_stability(gamma: Point, strategy: ProverStrategy) -> Transcript:
    """Against a uniform level bound for the tower union on the
    neighborhood of gamma: the claimed level induces a tower claim at that
    level, whose descent lands past the claimed data."""
    mod = strategy.ask("omega")
    p, i = mod.p, mod.n
    q = max(p, i + 1)
    beta = _bumped(gamma, q)
    checks = (
        _diff_bound_check(beta, gamma, 1, "gamma"),
        _prefix_check(beta, gamma, p, "gamma"),
        Check("exceeds-bound", {"value": q, "bound": i}, True, q > i),
    )
    head = TranscriptStep(
        "omega", mod, {"difference-at": q, "tower-level": i}, beta, checks
    )
    steps = [head] + _tower_descent(gamma, strategy, i, q)
    return Transcript("omega-stability", {"gamma": gamma.to_json()}, tuple(steps))


def _marker_position(lower: int, children: int, target: int, bound: int) -> int:
    # Least admissible spine position whose unpairing selects the target
    # child. Every residue recurs along the unpaired first components, so
    # the scan terminates.
    n = max(lower, bound + 1)
    for _ in range(1_000_000):
        if first(n) % children == target:
            return n
        n += 1
    raise RuntimeError("no admissible marker position found")


def _fin_descent(
    node: RelExpr, depth: int, strategy: ProverStrategy
) -> tuple[Point, list[TranscriptStep]]:
    mod = strategy.ask(f"fin:{depth}")
    q = max(mod.p, mod.n + 1)
    if isinstance(node, Base):
        alpha = Point((0,) * q + (1,), (0,))
        checks = (
            Check(
                "fan-accepts",
                {"upto": q + 2},
                True,
                _fan_accepts(node, tuple(alpha.bar(q + 2))),
            ),
            _prefix_check(alpha, ZERO, mod.p, "zero"),
            Check("exceeds-bound", {"value": q, "bound": mod.n}, True, q > mod.n),
            Check(
                "zero-beyond",
                {"at": q, "bound": mod.n},
                True,
                alpha.at(q) == 0,
            ),
        )
        step = TranscriptStep(
            f"fin:{depth}", mod, {"difference-at": q}, alpha, (checks)
        )
        return alpha, [step]
    # One enlargement layer over starred children: commit to the child the
    # second modulus names, then place the spine marker far enough out that
    # the fan dispatch lands on that child past all claimed data.
    inner = strategy.ask(f"fin:{depth}:child")
    refine, raw = inner.p, inner.n
    cs = node.child.children
    child_index = raw % len(cs)
    marker = _marker_position(q + refine + 1, len(cs), child_index, mod.n)
    tail, child_steps = _fin_descent(cs[child_index], depth + 1, strategy)
    alpha = tail.with_prefix((0,) * marker + (1,))
    support = marker + 1 + len(tail.pre)
    checks = (
        Check("exceeds-bound", {"value": marker, "bound": mod.n}, True, marker > mod.n),
        Check(
            "tail-budget",
            {"have": marker - (q + 1), "need": refine},
            True,
            marker - (q + 1) >= refine,
        ),
        Check(
            "dispatch-matches",
            {"marker": marker, "children": len(cs), "target": child_index},
            True,
            first(marker) % len(cs) == child_index,
        ),
        _prefix_check(alpha, ZERO, mod.p, "zero"),
        Check(
            "fan-accepts",
            {"upto": support + 1},
            True,
            _fan_accepts(node, tuple(alpha.bar(support + 1))),
        ),
    )
    step = TranscriptStep(
        f"fin:{depth}",
        mod,
        {"marker": marker, "child": child_index, "second-modulus": inner.to_json()},
        alpha,
        checks,
    )
    return alpha, [step] + child_steps


def refute_fin_containment(r: RelExpr, strategy: ProverStrategy) -> Transcript:
    """Against containment of the fan of a starred expression in the
    relation's class of the zero sequence with uniform moduli: descend the
    expression, placing one spine marker per enlargement layer, and defeat
    the claimed agreement bound at the innermost level."""
    nf = estar_normal_form(r)
    _, steps = _fin_descent(nf, 0, strategy)
    return Transcript("fin-containment", {"expr": format_rel(r)}, tuple(steps))


# ---------------------------------------------------------------------------
# Verification


def _recompute_check(
    check: Check, point: Point | None, refs: dict[str, Point], fan_node: RelExpr | None
):
    kind, params = check.kind, check.params
    if kind == "exceeds-bound":
        return params["value"] > params["bound"]
    if kind == "tail-budget":
        return params["have"] >= params["need"]
    if kind == "dispatch-matches":
        return first(params["marker"]) % params["children"] == params["target"]
    if point is None:
        raise MalformedTranscript(f"check {kind!r} needs a point")
    if kind == "prefix-agrees":
        other = refs[params["with"]]
        return list(point.bar(params["upto"])) == list(other.bar(params["upto"]))
    if kind == "difference-count-at-most":
        other = refs[params["with"]]
        return (
            len(difference_positions(point, other, params["window"])) <= params["k"]
        )
    if kind == "points-equal":
        return first_difference(point, refs[params["with"]]) is None
    if kind == "points-differ":
        return first_difference(point, refs[params["with"]]) is not None
    if kind == "base-relation-fails":
        return not eventually_equal(point, refs[params["with"]])
    if kind == "tail-agrees-beyond":
        other = refs[params["with"]]
        return point.at(params["at"]) == other.at(params["at"])
    if kind == "values-differ-at":
        other = refs[params["with"]]
        return point.at(params["at"]) != other.at(params["at"])
    if kind == "zero-beyond":
        return point.at(params["at"]) == 0
    if kind == "fan-accepts":
        if fan_node is None:
            raise MalformedTranscript("fan check outside a fan descent")
        return _fan_accepts(fan_node, tuple(point.bar(params["upto"])))
    raise MalformedTranscript(f"unknown check kind {kind!r}")


def _point_refs(t: Transcript) -> dict[str, Point]:
    refs = {"zero": ZERO}
    for key in ("gamma", "a", "b", "alpha"):
        if key in t.inputs:
            refs[key] = Point.from_json(t.inputs[key])
    if t.op == "equality-decidability":
        refs["alpha"] = ZERO
    return refs


def _fan_nodes_along(t: Transcript) -> list[RelExpr | None]:
    if t.op != "fin-containment":
        return [None] * len(t.steps)
    node = estar_normal_form(parse_rel(t.inputs["expr"]))
    nodes: list[RelExpr | None] = []
    for step in t.steps:
        nodes.append(node)
        if not isinstance(node, Base):
            cs = node.child.children
            child = step.derived.get("child")
            if not isinstance(child, int) or not 0 <= child < len(cs):
                raise MalformedTranscript("fan descent step names no valid child")
            node = cs[child]
    return nodes


def _reexecute_checks(t: Transcript) -> bool:
    refs = _point_refs(t)
    nodes = _fan_nodes_along(t)
    all_checks = []
    for step, node in zip(t.steps, nodes):
        for check in step.checks:
            got = _recompute_check(check, step.point, refs, node)
            if got != check.got:
                return False
            all_checks.append(check)
    # Exactly the last check fails; everything before it passes.
    return all(c.ok for c in all_checks[:-1]) and not all_checks[-1].ok


def _replay_strategy(t: Transcript) -> ProverStrategy:
    table = {}
    for step in t.steps:
        if step.tag is not None and step.modulus is not None:
            table.setdefault(step.tag, step.modulus)
            inner = step.derived.get("second-modulus")
            if inner is not None:
                table.setdefault(f"{step.tag}:child", Modulus.from_json(inner))
    return ProverStrategy(lambda tag: table.get(tag))


def _replay(t: Transcript) -> Transcript:
    inputs = t.inputs
    try:
        if t.op == "equality-decidability":
            return refute_equality_decidability(
                Modulus.from_json(inputs["modulus"]),
                DecisionBranch(inputs["branch"]),
            )
        if t.op == "vitali-stability":
            return refute_vitali_stability(
                Point.from_json(inputs["gamma"]), Modulus.from_json(inputs["modulus"])
            )
        if t.op == "apartness":
            return refute_apartness(
                Point.from_json(inputs["a"]),
                Point.from_json(inputs["b"]),
                Modulus.from_json(inputs["modulus"]),
                ApartnessBranch(inputs["branch"]),
            )
        if t.op == "decidability-on-omega-class":
            return refute_decidability_on_omega_class(
                Point.from_json(inputs["gamma"]),
                Modulus.from_json(inputs["modulus"]),
                DecisionBranch(inputs["branch"]),
            )
        if t.op == "tower-collapse":
            return refute_tower_collapse(
                Point.from_json(inputs["gamma"]), int(inputs["i"]), _replay_strategy(t)
            )
        if t.op == "omega-stability":
            return refute_omega_stability(
                Point.from_json(inputs["gamma"]), _replay_strategy(t)
            )
        if t.op == "fin-containment":
            return refute_fin_containment(
                parse_rel(inputs["expr"]), _replay_strategy(t)
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedTranscript(f"inputs do not replay: {exc}") from exc
    raise MalformedTranscript(f"unknown transcript op {t.op!r}")


def verify_transcript(t: Transcript) -> bool:
    """Re-execute every recorded check and replay the whole construction.

    True exactly when each check recomputes to its recorded value, every
    check but the last passes, the last fails, and the construction
    replayed from the inputs and recorded moduli reproduces the transcript
    verbatim.
    """
    if t.outcome != "contradiction":
        return False
    try:
        if not _reexecute_checks(t):
            return False
        replayed = _replay(t)
    except MalformedTranscript:
        raise
    except StrategyIncomplete:
        return False
    except (TypeError, KeyError, ValueError, IndexError):
        # Value-level tampering inside a well-formed shape.
        return False
    return replayed.to_json() == t.to_json()
