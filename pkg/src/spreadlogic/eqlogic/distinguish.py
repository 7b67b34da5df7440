"""Distinguishing sentences for sums over strictly increasing value runs.

Two runs that split at index p put different toy spreads at that position;
the uniqueness sentence for the smaller value is the candidate separator:
the smaller run carries that value exactly once (strict growth), the larger
run skips it entirely. The report pins the candidate together with what the
evaluators actually say on both sides, so a recipe that does not survive
evaluation is exposed rather than papered over.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotApart, PreconditionFailed
from ..points import Point
from ..seqcore import StrictIncSeq
from ..toyspread import SeqSum
from .evaluate import Verdict, evaluate
from .formulas import Formula, format_formula, make_tag
from .oracle import oracle_evaluate

__all__ = ["DistinguishReport", "distinguish", "zeta_from_binary"]


def zeta_from_binary(gamma: Point) -> StrictIncSeq:
    """Strictly increasing run encoding a choice sequence.

    Starts at 2 and steps by 1 + gamma(i), so distinct eventually periodic
    inputs give distinct runs and every run starts with 2. This is the
    injection carrying a continuum of inputs to pairwise apart runs.
    """
    values = [2]
    for i in range(len(gamma.pre)):
        values.append(values[-1] + 1 + gamma.at(i))
    increments = tuple(1 + v for v in gamma.period)
    return StrictIncSeq(tuple(values), increments)


@dataclass(frozen=True)
class DistinguishReport:
    p: int
    swapped: bool
    order: int
    sentence_text: str
    expected_first: str
    expected_second: str
    actual_first: Verdict
    actual_second: Verdict
    oracle_first: Verdict | None
    oracle_second: Verdict | None
    recipe_confirmed: bool
    note: str

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "swapped": self.swapped,
            "order": self.order,
            "sentence": self.sentence_text,
            "expected": {"first": self.expected_first, "second": self.expected_second},
            "actual": {
                "first": self.actual_first.to_json(),
                "second": self.actual_second.to_json(),
            },
            "recipe_confirmed": self.recipe_confirmed,
            "note": self.note,
        }
        if self.oracle_first is not None and self.oracle_second is not None:
            out["oracle"] = {
                "first": self.oracle_first.to_json(),
                "second": self.oracle_second.to_json(),
            }
        return out


def distinguish(
    zeta: StrictIncSeq,
    eta: StrictIncSeq,
    scan_bound: int = 512,
    oracle_depth: int | None = None,
    jobs: int = 1,
) -> tuple[Formula, DistinguishReport]:
    """Candidate separating sentence for two runs, with both evaluations.

    Both runs must start at 2. The first index p where they differ names
    the sentence rho[v-1] for the smaller value v at p; the report carries
    the expected split (holds on the smaller side, negation on the larger)
    next to what evaluate, and optionally the tree oracle, actually return.
    """
    if zeta.value_at(0) != 2 or eta.value_at(0) != 2:
        raise PreconditionFailed("both runs must start at 2")
    p = next(
        (i for i in range(scan_bound + 1) if zeta.value_at(i) != eta.value_at(i)),
        None,
    )
    if p is None:
        raise NotApart(f"no difference within the first {scan_bound + 1} values")
    swapped = zeta.value_at(p) > eta.value_at(p)
    low, high = (eta, zeta) if swapped else (zeta, eta)
    order = low.value_at(p) - 1
    sentence = make_tag("rho", (order,))

    verdict_low = evaluate(sentence, SeqSum(low))
    verdict_high = evaluate(sentence, SeqSum(high))
    oracle_low = oracle_high = None
    if oracle_depth is not None:
        # Ranks in a depth-d truncation never exceed d, so a cap of d+1
        # cannot fire and the oracle only reports genuine non-settling.
        oracle_low = oracle_evaluate(
            sentence, SeqSum(low), depth=oracle_depth, rank_cap=oracle_depth + 1, jobs=jobs
        )
        oracle_high = oracle_evaluate(
            sentence, SeqSum(high), depth=oracle_depth, rank_cap=oracle_depth + 1, jobs=jobs
        )

    confirmed = verdict_low.is_holds and verdict_high.is_neg
    if oracle_depth is not None:
        confirmed = confirmed and oracle_low.is_holds and oracle_high.is_neg

    def orient(a, b):
        return (b, a) if swapped else (a, b)

    expected_first, expected_second = orient("holds", "neg_holds")
    actual_first, actual_second = orient(verdict_low, verdict_high)
    oracle_first, oracle_second = orient(oracle_low, oracle_high)
    note = (
        f"runs split at index {p}; the smaller side carries value {order + 1} "
        f"exactly once, the larger side never"
    )
    if swapped:
        note += "; roles swapped, the second run is the smaller side"
    report = DistinguishReport(
        p=p,
        swapped=swapped,
        order=order,
        sentence_text=format_formula(sentence),
        expected_first=expected_first,
        expected_second=expected_second,
        actual_first=actual_first,
        actual_second=actual_second,
        oracle_first=oracle_first,
        oracle_second=oracle_second,
        recipe_confirmed=confirmed,
        note=note,
    )
    return sentence, report
