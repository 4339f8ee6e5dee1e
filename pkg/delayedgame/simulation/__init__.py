"""Monte Carlo simulation of the delayed game."""

from .engine import run_batch, simulate_path, simulate_paths
from .exceptions import MaxObservationsExceeded
from .main import (
    empirical_distributions,
    estimate_functional,
    simulate_batch,
    simulate_outcomes,
    summarize,
    tau_histogram,
    win_counts,
)
from .models import NOT_CROSSED, FunctionalEstimate, PathBatch, SimConfig, SimSummary, WinCounts
from .random import batch_sizes, child_generator

__all__ = [
    "batch_sizes",
    "child_generator",
    "empirical_distributions",
    "estimate_functional",
    "FunctionalEstimate",
    "MaxObservationsExceeded",
    "NOT_CROSSED",
    "PathBatch",
    "run_batch",
    "SimConfig",
    "simulate_batch",
    "simulate_outcomes",
    "simulate_path",
    "simulate_paths",
    "SimSummary",
    "summarize",
    "tau_histogram",
    "WinCounts",
]
