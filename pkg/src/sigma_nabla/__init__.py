"""Exact arithmetic for sigma/nabla-modules over p-adic Laurent-series
rings, with a point-level Frobenius and L-function toolkit."""

from .errors import (
    AmbiguousValuation,
    CocycleViolated,
    DivisionByZero,
    MembershipViolated,
    NonUnitPivot,
    NotAUnit,
    NotConverged,
    NotHorizontal,
    NumericalFailure,
    ParseError,
    PrecisionExhausted,
    PreconditionFailed,
    SigmaNablaError,
    SingularFrobenius,
    SingularInput,
    WindowOverflow,
)
from .padic import (
    EQUAL,
    INDISTINGUISHABLE,
    UNEQUAL,
    IntPolynomial,
    NewtonPolygon,
    PadicNumber,
    UnramifiedField,
    UnramifiedScalar,
    complex_root_magnitudes,
    newton_polygon,
)

__version__ = "0.1.0"
