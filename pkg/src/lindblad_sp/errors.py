"""Exception types raised across the package."""

from __future__ import annotations


class LindbladError(ValueError):
    """Base class for every error raised by this package."""


class NotHermitian(LindbladError):
    pass


class DimMismatch(LindbladError):
    pass


class BadOrdering(LindbladError):
    pass


class InvalidStepSize(LindbladError):
    pass


class NonPositiveTrace(LindbladError):
    pass


class TermExplosion(LindbladError):
    pass


class UnsupportedScheme(LindbladError):
    pass


class NonlinearMap(LindbladError):
    pass


class DegenerateState(LindbladError):
    pass


class BadParameter(LindbladError):
    pass


class BoundViolation(LindbladError):
    """An error bound was exceeded; ``violations`` lists the offending records."""

    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = violations or []


class IndefiniteState(UserWarning):
    """Non-fatal: an integrator produced a state with a negative eigenvalue."""
