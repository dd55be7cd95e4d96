"""Exception hierarchy.

Every error raised by the library derives from :class:`FlatToriError`.
Domain errors (bad mathematical input) and parse errors (bad files) are kept
apart so the command line can map them to different exit codes.
"""


class FlatToriError(ValueError):
    """Base class for all library errors."""


class DomainError(FlatToriError):
    """Input violates a mathematical precondition."""


class NonSymmetric(DomainError):
    pass


class NotPositiveDefinite(DomainError):
    pass


class NoConvergence(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class NonPositiveDeterminant(DomainError):
    pass


class SingularBasis(DomainError):
    pass


class InvalidTangent(DomainError):
    pass


class ParameterOutOfRange(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class ZeroForm(DomainError):
    pass


class DegenerateInput(DomainError):
    pass


class EmptySequence(DomainError):
    pass


class ParseError(FlatToriError):
    """A matrix document could not be decoded."""


class NotUnimodular(DomainError):
    pass
