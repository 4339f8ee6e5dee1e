"""Base exceptions for delayedgame."""


class DelayedGameError(Exception):
    """Base class for all errors raised by delayedgame."""


class ConfigurationError(DelayedGameError):
    """Raised when game parameters or a run configuration are invalid."""


class DomainError(DelayedGameError):
    """Raised when a computation is requested outside its domain of validity."""


class NonPositiveRate(ConfigurationError):
    """Raised when a rate or a law parameter is not strictly positive."""


class NonIntegerThreshold(ConfigurationError):
    """Raised when a threshold is not an integer."""


class ThresholdTooSmall(ConfigurationError):
    """Raised when a threshold is below 1."""


class InvalidLawShape(ConfigurationError):
    """Raised when an Erlang shape is not an integer of at least 1."""


class QueryDomainError(DomainError):
    """Raised when a transform is evaluated outside |u| <= 1, |v| <= 1, Re(theta) >= 0."""


class NotClosedFormCapable(DomainError):
    """Raised when a closed-form transform is requested for a non-exponential observation law."""
