"""Exception types shared across the library.

Every error that can escape a public operation is defined here so callers
(and the CLI) can catch one base class.
"""


class SpreadLogicError(Exception):
    """Base class for all library errors."""


class RootRejected(SpreadLogicError):
    """The empty sequence is rejected, so the tree has no members at all."""


class SearchExhausted(SpreadLogicError):
    """A mu-search ran past its bound without finding an accepted child."""


class NotInjectiveToDepth(SpreadLogicError):
    """A coded prefix branches below the inspected depth, so no unique member exists."""


class NotMember(SpreadLogicError):
    """The given point falls outside the tree or structure it was offered to."""


class ParseError(SpreadLogicError):
    """Raised on malformed formula or relation-expression text.

    `position` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ScopeError(SpreadLogicError):
    """A formula uses a variable outside any binder for it."""


class NotApart(SpreadLogicError):
    """Two points claimed apart agree everywhere on the inspected range."""


class PreconditionFailed(SpreadLogicError):
    """An operation's stated precondition does not hold for these arguments."""


class DepthInsufficient(SpreadLogicError):
    """The truncated tree is too shallow for the verdict to have stabilized."""


class NotInE(SpreadLogicError):
    """The relation expression is not built from base/plus/union only."""


class NotEStar(SpreadLogicError):
    """The relation expression is not in the normalized plus-of-union shape."""


class NotVitaliEquivalent(SpreadLogicError):
    """The two points are not base-related, so no agreement index exists."""


class StrategyIncomplete(SpreadLogicError):
    """The prover strategy has no answer for a tag the refuter asked about."""


class MalformedTranscript(SpreadLogicError):
    """A transcript fails schema or replay validation; the message says where."""
