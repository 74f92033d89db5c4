"""Exception hierarchy shared across the workbench."""


class CutcalcError(Exception):
    """Base class for all workbench errors."""


class ParseError(CutcalcError):
    """Malformed literal (field element, sequence, or word)."""


class DivisionByZero(CutcalcError):
    """A denominator became identically zero.

    Callers performing face restrictions treat this as the point at
    infinity rather than as a hard failure.
    """


class NonAffine(CutcalcError):
    """solve_affine was called on an input of degree > 1 in the variable."""


class NonConstantLeadingCoefficient(CutcalcError):
    """The affine solve would be conditional on a parameter being nonzero."""


class DimensionMismatch(CutcalcError):
    """Vectors of different lengths were mixed in a linear-algebra call."""


class AlphabetOverflow(CutcalcError):
    """A sequence entry fell outside the declared alphabet or endpoint set."""


class NoncommutativeBase(CutcalcError):
    """Shuffle products need a graded-commutative coefficient DGA."""


class EndpointMismatch(CutcalcError):
    """Path composition requires the middle endpoints to agree."""


class UnsupportedShape(CutcalcError):
    """A cycle does not belong to the shape class the engine can handle."""


class InadmissibleSpecialization(CutcalcError):
    """A boundary specialization produced a forbidden coordinate value."""


class TheoryDomainError(CutcalcError):
    """A sequence is outside the domain of the requested integration theory."""


class DivergentSeries(CutcalcError):
    """A series evaluation was requested at a point where it diverges."""


class SingularEndpoint(CutcalcError):
    """An iterated integral has a non-integrable singularity at an endpoint."""


class RegularizationMismatch(CutcalcError):
    """Algebraic and numeric regularized values disagree beyond tolerance."""


class ToleranceNotCertified(CutcalcError):
    """A numeric routine could not certify the requested error bound."""
