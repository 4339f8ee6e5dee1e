"""Custom exceptions for transform inversion."""

from delayedgame.exceptions import DomainError


class PolesTooClose(DomainError):
    """Raised when two poles of a rational transform coincide within the separation guard."""


class NonConvergent(DomainError):
    """Raised when the Euler-accelerated inversion series fails to settle."""


class NoDensity(DomainError):
    """Raised when a density is requested for a lattice-valued observation time."""
