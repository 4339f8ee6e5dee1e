"""Command-line interface."""

from .main import build_parser, execute, main, rerun_from_metadata
from .models import RunConfig, RunMetadata

__all__ = ["build_parser", "execute", "main", "rerun_from_metadata", "RunConfig", "RunMetadata"]
