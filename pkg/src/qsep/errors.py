"""Exception types raised across the package."""

from __future__ import annotations


class QsepError(Exception):
    """Base class for all errors raised by qsep."""


class DimensionMismatch(QsepError, ValueError):
    pass


class BadDimension(QsepError, ValueError):
    pass


class NotHermitian(QsepError, ValueError):
    pass


class NotNormalized(QsepError, ValueError):
    pass


class NotOrthonormal(QsepError, ValueError):
    pass


class Incomplete(QsepError, ValueError):
    """A basis has fewer vectors than the space dimension."""


class UnsupportedDimensions(QsepError, ValueError):
    """The exact separability oracle only covers 2x2, 2x3 and 3x2."""


class CertificateMismatch(QsepError, ValueError):
    pass


class InvariantViolation(QsepError, ValueError):
    """A contract-tagged value failed validation.

    ``invariant`` names the check (e.g. ``"hermiticity"``) and ``residual``
    is the measured violation.
    """

    def __init__(self, invariant: str, residual: float, message: str | None = None):
        self.invariant = invariant
        self.residual = float(residual)
        super().__init__(message or f"{invariant} violated (residual {self.residual:.3g})")


class ParseError(QsepError, ValueError):
    pass


class BadSpec(QsepError, ValueError):
    pass
