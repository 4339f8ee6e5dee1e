"""Custom exceptions for the game model."""

from delayedgame.exceptions import DomainError


class NoCrossing(DomainError):
    """Raised when a casualty path never reaches its threshold."""
