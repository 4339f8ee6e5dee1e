"""Game model: parameter validation and exit-index bookkeeping."""

from .exceptions import NoCrossing
from .main import exit_indices, validate_params
from .models import PathOutcome

__all__ = ["exit_indices", "NoCrossing", "PathOutcome", "validate_params"]
