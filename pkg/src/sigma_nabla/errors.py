"""Exception types shared across the library.

Every mathematically meaningful failure has its own class so that callers
(and the CLI exit-code logic) can tell "the input refutes the claim" apart
from "the input is malformed".
"""


class SigmaNablaError(Exception):
    """Base class for all library errors."""


class DivisionByZero(SigmaNablaError):
    """Divisor is exactly zero or indistinguishable from zero at precision."""


class PrecisionExhausted(SigmaNablaError):
    """The requested result has no provable p-adic digits."""


class AmbiguousValuation(SigmaNablaError):
    """A coefficient's valuation is undetermined and affects the answer."""


class NumericalFailure(SigmaNablaError):
    """A floating-point root finder failed to produce usable output."""


class WindowOverflow(SigmaNablaError):
    """A series operation exceeded the configured exponent window."""


class NotAUnit(SigmaNablaError):
    """Inversion was requested for a series that is not a unit at precision."""


class MembershipViolated(SigmaNablaError):
    """An entry provably fails a ring-membership condition."""

    def __init__(self, message, entry=None, exponent=None):
        super().__init__(message)
        self.entry = entry
        self.exponent = exponent


class SingularFrobenius(SigmaNablaError):
    """A Frobenius matrix is not invertible at working precision."""


class SingularInput(SigmaNablaError):
    """A matrix that must be invertible is singular at working precision."""


class NotConverged(SigmaNablaError):
    """An iteration failed to contract; the input is outside the regime."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class NonUnitPivot(SigmaNablaError):
    """Gauss elimination hit a pivot that is not a unit (hypothesis failure)."""


class NotHorizontal(SigmaNablaError):
    """A vector that should be horizontal has a nonzero connection residual."""

    def __init__(self, message, residual_valuation=None, position=None):
        super().__init__(message)
        self.residual_valuation = residual_valuation
        self.position = position


class PreconditionFailed(SigmaNablaError):
    """A checked hypothesis of an operation fails; .which names it."""

    def __init__(self, which, message=None):
        super().__init__(message or which)
        self.which = which


class CocycleViolated(SigmaNablaError):
    """A descent-datum cocycle identity fails for a pair of group elements."""

    def __init__(self, g, h, message=None):
        super().__init__(message or f"cocycle fails at ({g}, {h})")
        self.pair = (g, h)


class ParseError(SigmaNablaError):
    """Structured-text input is malformed; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
