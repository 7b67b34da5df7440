"""Decidable trees, tail-agreement relations, and modulus refutations.

The package keeps two independent evaluation routes for every counted
claim: closed forms over structure descriptors, and rank readouts off
truncated trees. The refuter side consumes claimed continuity data and
returns machine-checkable contradiction transcripts.
"""

from .errors import (
    DepthInsufficient,
    MalformedTranscript,
    NotApart,
    NotEStar,
    NotInE,
    NotInjectiveToDepth,
    NotMember,
    NotVitaliEquivalent,
    ParseError,
    PreconditionFailed,
    RootRejected,
    ScopeError,
    SearchExhausted,
    SpreadLogicError,
    StrategyIncomplete,
)
from .points import Point, ZERO
from .seqcore import FinSeq, StrictIncSeq
from .spread import (
    SpreadLaw,
    baire_law,
    cb_rank_profile,
    constant_law,
    is_fan_to_depth,
    leftmost_inhabitant,
    predicate_law,
    retract,
    table_law,
    toy_law,
    validate_spread_law,
)
from .toyspread import (
    ClosureFan,
    FiniteSum,
    OmegaProduct,
    Product,
    SeqSum,
    Toy,
    ToyPoint,
    classify_point,
    law_for,
    normalize,
)
from .eqlogic import (
    evaluate,
    make_tag,
    oracle_evaluate,
    parse_formula,
    qe_decide,
)
from .vitali import (
    Base,
    Modulus,
    Plus,
    RelExpr,
    Tower,
    UnionSeq,
    decide,
    fan_for,
    fin_member,
    parse_rel,
)
from .refuter import ProverStrategy, Transcript, verify_transcript

__version__ = "0.1.0"
