"""Exception types raised by the cuspidal torsion toolkit."""


class CuspidalError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(CuspidalError):
    """Input data outside the domain of an operation (bad prime, wrong degree, ...)."""


class UndefinedCharacterError(DomainError):
    """The character e_H is undefined for this modulus (NF with 3 | N)."""


class ExcludedCaseError(CuspidalError):
    """The closed-form results do not determine this case."""


class LocalizationError(CuspidalError):
    """An operation needs 2 to be invertible but it was not inverted."""


class TruncationError(CuspidalError):
    """A truncated q-series does not carry enough terms for the request."""
