"""First-order equality language over the toy spread structures."""

from .distinguish import DistinguishReport, distinguish, zeta_from_binary
from .evaluate import (
    HOLDS,
    NEG_HOLDS,
    Verdict,
    all_isolated,
    evaluate,
    order_count,
    structure_size,
)
from .formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Tag,
    alpha_equivalent,
    expand,
    format_formula,
    free_vars,
    make_tag,
    quantifier_rank,
    recognize,
)
from .oracle import oracle_evaluate, oracle_profile
from .parser import parse_formula
from .qe import EqualityType, enumerate_equality_types, model_truth, qe_decide

__all__ = [
    "And",
    "DistinguishReport",
    "Eq",
    "EqualityType",
    "Exists",
    "Forall",
    "Formula",
    "HOLDS",
    "Implies",
    "NEG_HOLDS",
    "Not",
    "Or",
    "Tag",
    "Verdict",
    "all_isolated",
    "alpha_equivalent",
    "distinguish",
    "enumerate_equality_types",
    "evaluate",
    "expand",
    "format_formula",
    "free_vars",
    "make_tag",
    "model_truth",
    "oracle_evaluate",
    "oracle_profile",
    "order_count",
    "parse_formula",
    "qe_decide",
    "quantifier_rank",
    "recognize",
    "structure_size",
    "zeta_from_binary",
]
