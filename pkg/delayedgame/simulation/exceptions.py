"""Custom exceptions for the simulator."""

from delayedgame.exceptions import DomainError


class MaxObservationsExceeded(DomainError):
    """Raised when a simulated game is still running after the maximal number of observations."""
