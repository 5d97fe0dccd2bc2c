"""Exception types shared by every module."""


class SympCanonError(Exception):
    """Base class for library errors."""


class PreconditionError(SympCanonError, ValueError):
    """An input violates a documented precondition (shape, symmetry, singularity...)."""


class BackendMismatch(SympCanonError, TypeError):
    """Operands come from incompatible scalar backends."""


class UnsupportedSpectrum(PreconditionError):
    """The exact backend cannot represent the eigenvalues of the input."""


class IndeterminateError(SympCanonError, ArithmeticError):
    """A floating computation could not decide a discrete quantity within tolerance."""
