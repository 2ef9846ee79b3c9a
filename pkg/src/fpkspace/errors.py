"""Exception types shared across the package."""


class FpkError(ValueError):
    """Base class for all errors raised by fpkspace."""


class DomainError(FpkError):
    """An argument lies outside the domain of an operation (e.g. ``n < 1``)."""


class StructuralError(FpkError):
    """Array shapes of the inputs do not fit together."""


class PreconditionError(FpkError):
    """A geometric precondition (unit length, orthogonality, tangency) fails."""


class NormalizationError(PreconditionError):
    """A vector that must have unit length does not."""


class TangencyError(PreconditionError):
    """A hypersurface normal is not orthogonal to the structure vector fields."""
