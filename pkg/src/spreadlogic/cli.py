"""Batch command-line front end.

Every result is one JSON document on stdout with sorted keys; narration
goes to stderr. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import SpreadLogicError
from .eqlogic import (
    evaluate,
    oracle_evaluate,
    parse_formula,
    qe_decide,
)
from .eqlogic.distinguish import distinguish
from .points import Point
from .refuter import (
    ApartnessBranch,
    DecisionBranch,
    ProverStrategy,
    Transcript,
    refute_apartness,
    refute_decidability_on_omega_class,
    refute_equality_decidability,
    refute_fin_containment,
    refute_omega_stability,
    refute_tower_collapse,
    refute_vitali_stability,
    verify_transcript,
)
from .seqcore import StrictIncSeq
from .spread import (
    DEFAULT_BRANCH_BOUND,
    DEFAULT_DEPTH,
    SpreadLaw,
    is_fan_to_depth,
    validate_spread_law,
)
from .toyspread import (
    ToyPoint,
    classify_point,
    descriptor_from_json,
    normalize,
)
from .vitali import (
    Modulus,
    UnionSeq,
    decide,
    desugar,
    fan_for,
    firing_child,
    parse_rel,
)

__all__ = ["main"]


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _json_arg(text: str) -> dict:
    return json.loads(text)


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def _point_arg(text: str) -> Point:
    return Point.from_json(json.loads(text))


def _modulus_arg(text: str) -> Modulus:
    p, n = _int_list(text)
    return Modulus(p, n)


def _seq_arg(text: str) -> StrictIncSeq:
    return StrictIncSeq.from_json(json.loads(text))


def _load_strategy(path: str | None) -> ProverStrategy:
    if path is None:
        return ProverStrategy.from_script({"default": [0, 0]})
    with open(path, encoding="utf-8") as fh:
        return ProverStrategy.from_script(json.load(fh))


def _cmd_check(args) -> int:
    f = parse_formula(args.formula)
    s = descriptor_from_json(_json_arg(args.structure))
    _note(f"evaluating {args.formula!r} by closed form")
    _emit(evaluate(f, s).to_json())
    return 0


def _cmd_oracle_check(args) -> int:
    f = parse_formula(args.formula)
    s = descriptor_from_json(_json_arg(args.structure))
    _note(f"reading {args.formula!r} off truncated trees, depth {args.depth}")
    verdict = oracle_evaluate(
        f,
        s,
        depth=args.depth,
        branch_bound=args.branch_bound,
        rank_cap=args.rank_cap,
        jobs=args.jobs,
    )
    _emit(verdict.to_json())
    return 0


def _cmd_distinguish(args) -> int:
    zeta = _seq_arg(args.zeta)
    eta = _seq_arg(args.eta)
    _note("searching for the first disagreement")
    _, report = distinguish(
        zeta,
        eta,
        scan_bound=args.scan_bound,
        oracle_depth=args.depth if args.oracle else None,
        jobs=args.jobs,
    )
    _emit(report.to_json())
    return 0


def _cmd_normalize(args) -> int:
    vec = _int_list(args.s)
    n, m, witness = normalize(vec)
    _note(f"normal form of {list(vec)} reached in {len(witness.steps)} steps")
    out: dict = {"n": n, "m": m}
    if args.witness:
        out["witness"] = witness.to_json()
    _emit(out)
    return 0


def _cmd_classify(args) -> int:
    obj = _json_arg(args.point)
    if "jumps" in obj:
        point = ToyPoint.from_json(obj)
    else:
        point = ToyPoint.from_point(Point.from_json(obj))
    _emit(classify_point(args.n, point).to_json())
    return 0


def _cmd_qe(args) -> int:
    f = parse_formula(args.sentence)
    _emit({"value": qe_decide(f)})
    return 0


def _cmd_vitali_decide(args) -> int:
    r = parse_rel(args.expr)
    a = _point_arg(args.a)
    b = _point_arg(args.b)
    value = decide(r, a, b)
    out: dict = {"value": value}
    if value and isinstance(desugar(r), UnionSeq):
        out["child"] = firing_child(r, a, b)
    _emit(out)
    return 0


def _cmd_vitali_fan(args) -> int:
    fan = fan_for(parse_rel(args.expr))
    report = validate_spread_law(fan.law, depth=args.depth, branch_bound=2)
    fan_ok = is_fan_to_depth(fan.law, args.depth, fan.bound, branch_bound=2)
    _note(f"checked the fan of {args.expr} to depth {args.depth}")
    _emit({"fan": fan_ok, "validation": report.to_json()})
    return 0


def _cmd_refute(args) -> int:
    strategy = _load_strategy(args.strategy)
    m = args.modulus
    gamma = args.gamma
    if args.name == "equality-decidability":
        t = refute_equality_decidability(m, DecisionBranch(args.branch))
    elif args.name == "vitali-stability":
        t = refute_vitali_stability(gamma, m)
    elif args.name == "apartness":
        branch = (
            ApartnessBranch(args.branch)
            if args.branch in ("first", "second")
            else ApartnessBranch.FIRST
        )
        t = refute_apartness(args.a, args.b, m, branch)
    elif args.name == "tower-collapse":
        t = refute_tower_collapse(gamma, args.i, strategy)
    elif args.name == "omega-stability":
        t = refute_omega_stability(gamma, strategy)
    elif args.name == "fin-containment":
        t = refute_fin_containment(parse_rel(args.expr), strategy)
    else:
        t = refute_decidability_on_omega_class(gamma, m, DecisionBranch(args.branch))
    _note(f"{args.name}: contradiction in {len(t.steps)} step(s)")
    _emit(t.to_json())
    return 0


def _cmd_verify(args) -> int:
    text = args.transcript
    if not text.lstrip().startswith("{"):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    t = Transcript.from_json(json.loads(text))
    _emit({"valid": verify_transcript(t)})
    return 0


def _cmd_validate_law(args) -> int:
    law = SpreadLaw.from_json(_json_arg(args.law))
    report = validate_spread_law(
        law, depth=args.depth, branch_bound=args.branch_bound
    )
    _emit(report.to_json())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spreadlogic",
        description="Decidable trees, sentence families over them, and "
        "modulus-consuming refutations, with JSON output.",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="seed for randomized sweeps"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a sentence by closed form")
    p.add_argument("formula")
    p.add_argument("--structure", required=True, help="structure descriptor JSON")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("oracle-check", help="evaluate a sentence on truncated trees")
    p.add_argument("formula")
    p.add_argument("--structure", required=True, help="structure descriptor JSON")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--branch-bound", type=int, default=None)
    p.add_argument("--rank-cap", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_oracle_check)

    p = sub.add_parser(
        "distinguish", help="emit a sentence separating two increasing sequences"
    )
    p.add_argument("--zeta", required=True, help="strictly increasing sequence JSON")
    p.add_argument("--eta", required=True, help="strictly increasing sequence JSON")
    p.add_argument("--oracle", action="store_true", help="cross-check on trees")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--scan-bound", type=int, default=512)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_distinguish)

    p = sub.add_parser("normalize", help="normal form of a finite sum vector")
    p.add_argument("--s", required=True, help="comma-separated entries, e.g. 1,3,3,2")
    p.add_argument("--witness", action="store_true", help="include the step witness")
    p.set_defaults(fn=_cmd_normalize)

    p = sub.add_parser("classify", help="limit order of a point of a toy tree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--point", required=True, help="point JSON")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("qe", help="decide a sentence over the infinite structure")
    p.add_argument("sentence")
    p.set_defaults(fn=_cmd_qe)

    p = sub.add_parser("vitali", help="relation expressions and their fans")
    vsub = p.add_subparsers(dest="vitali_command", required=True)
    v = vsub.add_parser("decide", help="decide a relation on two points")
    v.add_argument("expr", help="relation expression, e.g. (plus (union (base)))")
    v.add_argument("a", help="point JSON")
    v.add_argument("b", help="point JSON")
    v.set_defaults(fn=_cmd_vitali_decide)
    v = vsub.add_parser("fan", help="build and validate the fan of an expression")
    v.add_argument("expr")
    v.add_argument("--depth", type=int, default=10)
    v.set_defaults(fn=_cmd_vitali_fan)

    p = sub.add_parser("refute", help="run a refutation against a claimed modulus")
    p.add_argument(
        "name",
        choices=[
            "equality-decidability",
            "vitali-stability",
            "apartness",
            "tower-collapse",
            "omega-stability",
            "fin-containment",
            "decidability-on-omega-class",
        ],
    )
    p.add_argument("--strategy", default=None, help="strategy script JSON file")
    p.add_argument("--modulus", type=_modulus_arg, default=Modulus(0, 0))
    p.add_argument(
        "--branch",
        default="all-equal",
        choices=["all-equal", "all-apart", "first", "second"],
    )
    p.add_argument("--gamma", type=_point_arg, default=Point.constant(0))
    p.add_argument("--a", type=_point_arg, default=Point.constant(0))
    p.add_argument("--b", type=_point_arg, default=Point.constant(1))
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--expr", default="(plus (union (base)))")
    p.set_defaults(fn=_cmd_refute)

    p = sub.add_parser("verify", help="verify a refutation transcript")
    p.add_argument("transcript", help="transcript JSON or a path to it")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("validate-law", help="scan a tree law for defects")
    p.add_argument("law", help="law JSON")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--branch-bound", type=int, default=DEFAULT_BRANCH_BOUND)
    p.set_defaults(fn=_cmd_validate_law)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.fn(args)
    except SpreadLogicError as exc:
        _note(f"error: {exc}")
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _note(f"error: {exc}")
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1


if __name__ == "__main__":
    sys.exit(main())
