"""Exception hierarchy.

Everything raised on purpose derives from :class:`SympalError`.  Errors that
signal a violated mathematical precondition (not positive-definite, forms
that do not commute, ...) derive from :class:`PreconditionError` and carry
the residual that triggered them when one exists.
"""

from __future__ import annotations


class SympalError(Exception):
    """Base class for all errors raised by this package."""


class MatrixFormatError(SympalError, ValueError):
    """Malformed matrix data: bad shape, non-finite entries, bad JSON."""


class PreconditionError(SympalError, ValueError):
    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class DimensionError(PreconditionError):
    pass


class NotSymmetricError(PreconditionError):
    pass


class NotPositiveDefiniteError(PreconditionError):
    pass


class NotPositiveSemidefiniteError(PreconditionError):
    pass


class NotSymplecticSubspaceError(PreconditionError):
    """A subspace that had to be symplectic has a degenerate ω-Gram matrix."""


class CommutatorError(PreconditionError):
    """Two forms fail to Poisson-commute (or, for powers, to commute)."""


class SpectrumMismatchError(PreconditionError):
    def __init__(self, message: str, indices=(), residual: float | None = None):
        super().__init__(message, residual)
        self.indices = tuple(indices)


class DivergentPartitionError(PreconditionError):
    """A zero mode makes the phase-space integral diverge."""


class NumericalDegeneracyError(PreconditionError):
    """An algorithm could not resolve a (near-)degenerate spectrum."""
