"""Exception hierarchy for the riskbook package.

Everything raised on purpose derives from :class:`RiskbookError`, so callers
can catch one type at an API boundary.  Identifier-lookup failures share the
:class:`UnknownElement` base.
"""


class RiskbookError(Exception):
    """Base class for all errors raised by riskbook."""


class DuplicateElement(RiskbookError):
    """An identifier was declared more than once."""


class UnknownElement(RiskbookError):
    """An identifier is not declared in the structure being queried."""


class UnknownRule(UnknownElement):
    pass


class UnknownTrajectory(UnknownElement):
    pass


class UnknownScenario(UnknownElement):
    pass


class UnknownRealization(UnknownElement):
    pass


class DomainMismatch(RiskbookError):
    """A cost variable is not defined on exactly the space's scenarios."""


class InvalidAlpha(RiskbookError):
    """A quantile level is outside [0, 1] or missing where required."""


class EmptySupport(RiskbookError):
    """No scenario with positive probability is available."""


class PreconditionViolated(RiskbookError):
    """An operation was called with arguments that break its contract."""


class AssumptionUnmet(RiskbookError):
    """A configured risk measure lacks a property the analysis depends on."""


class NoWitness(RiskbookError):
    """No compensating rule exists; the tradeoff hypotheses do not hold."""


class ParseError(RiskbookError):
    """The instance document is not well-formed."""


class ValidationError(RiskbookError):
    """The instance document is well-formed but violates an invariant."""
