"""Custom exceptions for series arithmetic and D-operators."""

from delayedgame.exceptions import DomainError


class SingularConstantTerm(DomainError):
    """Raised when the reciprocal of a series with vanishing constant term is requested."""


class TruncationTooSmall(DomainError):
    """Raised when a coefficient beyond the retained truncation order is requested."""


class GridTooCoarse(DomainError):
    """Raised when a Fourier grid is too small for the requested coefficient order."""
