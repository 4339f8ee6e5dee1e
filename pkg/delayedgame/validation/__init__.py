"""Acceptance checks of the analytic results against independent oracles."""

from .checks import CHECKS, SuiteContext, random_params, run_acceptance_suite
from .models import CheckResult, results_frame
from .stats import (
    ks_critical_value,
    ks_statistic,
    pooled_counts,
    total_variation,
    tv_tolerance,
)

__all__ = [
    "CHECKS",
    "CheckResult",
    "ks_critical_value",
    "ks_statistic",
    "pooled_counts",
    "random_params",
    "results_frame",
    "run_acceptance_suite",
    "SuiteContext",
    "total_variation",
    "tv_tolerance",
]
