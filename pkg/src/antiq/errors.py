"""Exception types raised by :mod:`antiq`."""


class AntiqError(ValueError):
    """Base class for all library errors."""


class InvalidDimensionError(AntiqError):
    pass


class DimensionMismatchError(AntiqError):
    pass


class ProjectionError(AntiqError):
    """Trace projection onto a basis that is not orthonormal."""


class NotAStateError(AntiqError):
    pass


class NotPureError(AntiqError):
    pass


class DomainError(AntiqError):
    """Input outside the domain of a function (e.g. a non-PSD matrix)."""


class InvalidDistributionError(AntiqError):
    pass


class NonUnitaryError(AntiqError):
    pass


class TransformError(AntiqError):
    """Transform matrix violates its group invariant."""


class InvalidSignatureError(AntiqError):
    """Theta signature with wrong length, non-sign entries or a flipped identity."""
