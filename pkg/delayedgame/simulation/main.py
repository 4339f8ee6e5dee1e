"""Batched simulation runs and the estimators built on them."""

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

from delayedgame.enums import DistributionKind, Provenance
from delayedgame.game import PathOutcome
from delayedgame.inversion import DistributionTable
from delayedgame.models import GameParams, TransformQuery

from .engine import run_batch
from .models import FunctionalEstimate, PathBatch, SimConfig, SimSummary, WinCounts
from .random import batch_sizes

logger = logging.getLogger(__name__)


def simulate_outcomes(params: GameParams, config: SimConfig) -> PathBatch:
    """All paths of a run, merged in batch order.

    Batch b runs on the child stream derived from (seed, b), so the result does
    not depend on the number of workers.
    """
    sizes = batch_sizes(config.n_paths, config.batch_size)
    args = (
        repeat(params),
        repeat(config.seed),
        range(len(sizes)),
        sizes,
        repeat(config.mode),
        repeat(config.max_observations),
    )
    logger.info(
        "Simulating %d paths in %d batches (%s mode, %d workers)",
        config.n_paths,
        len(sizes),
        config.mode.value,
        config.workers,
    )
    if config.workers > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            batches = list(executor.map(run_batch, *args))
    else:
        batches = list(map(run_batch, *args))
    outcomes = PathBatch.concatenate(batches)
    outcomes.check_invariants(params)
    return outcomes


def _integrand(outcomes: PathBatch, query: TransformQuery) -> np.ndarray:
    """u^A_rho v^B_rho exp(-theta tau_rho) per path, in real arithmetic when the query is real."""
    if all(z.imag == 0 for z in (query.u, query.v, query.theta)):
        return (
            np.power(query.u.real, outcomes.a_rho)
            * np.power(query.v.real, outcomes.b_rho)
            * np.exp(-query.theta.real * outcomes.tau_rho)
        )
    return (
        np.power(query.u, outcomes.a_rho)
        * np.power(query.v, outcomes.b_rho)
        * np.exp(-query.theta * outcomes.tau_rho)
    )


def estimate_functional(outcomes: PathBatch, query: TransformQuery) -> FunctionalEstimate:
    """Sample mean of the joint functional with stderr sqrt(var(Re) + var(Im)) / sqrt(n)."""
    values = _integrand(outcomes, query)
    n = len(values)
    ddof = 1 if n > 1 else 0
    variance = np.var(values.real, ddof=ddof) + np.var(np.imag(values), ddof=ddof)
    return FunctionalEstimate(
        query=query, mean=complex(values.mean()), stderr=float(np.sqrt(variance / n))
    )


def _empirical_pmf(values: np.ndarray) -> DistributionTable:
    n = len(values)
    support, counts = np.unique(values, return_counts=True)
    p = counts / n
    return DistributionTable(
        kind=DistributionKind.PMF,
        provenance=Provenance.EMPIRICAL,
        support=support.tolist(),
        values=p.tolist(),
        stderr=np.sqrt(p * (1.0 - p) / n).tolist(),
        metadata={"n_samples": n},
    )


def tau_histogram(samples: np.ndarray) -> DistributionTable:
    """Density histogram with Freedman-Diaconis bins; support holds the bin centres."""
    n = len(samples)
    edges = np.histogram_bin_edges(samples, bins="fd")
    counts, edges = np.histogram(samples, bins=edges)
    width = np.diff(edges)
    p = counts / n
    return DistributionTable(
        kind=DistributionKind.PDF,
        provenance=Provenance.EMPIRICAL,
        support=((edges[:-1] + edges[1:]) / 2).tolist(),
        values=(p / width).tolist(),
        stderr=(np.sqrt(p * (1.0 - p) / n) / width).tolist(),
        metadata={"n_samples": n, "bin_rule": "freedman-diaconis", "bin_width": float(width[0])},
    )


def empirical_distributions(
    outcomes: PathBatch | Sequence[PathOutcome],
) -> tuple[DistributionTable, DistributionTable, DistributionTable]:
    """Empirical pmfs of A_rho and B_rho and the histogram of tau_rho."""
    if not isinstance(outcomes, PathBatch):
        outcomes = PathBatch.from_outcomes(list(outcomes))
    if len(outcomes) == 0:
        raise ValueError("At least one outcome is needed.")
    return (
        _empirical_pmf(outcomes.a_rho),
        _empirical_pmf(outcomes.b_rho),
        tau_histogram(outcomes.tau_rho),
    )


def win_counts(outcomes: PathBatch) -> WinCounts:
    """Games decided by A's defeat, B's defeat, or both at the same observation."""
    a_defeated = outcomes.nu1 == outcomes.rho
    b_defeated = outcomes.nu2 == outcomes.rho
    return WinCounts(
        a_only=int(np.sum(a_defeated & ~b_defeated)),
        b_only=int(np.sum(b_defeated & ~a_defeated)),
        both=int(np.sum(a_defeated & b_defeated)),
    )


def summarize(params: GameParams, config: SimConfig, outcomes: PathBatch) -> SimSummary:
    """Estimators of a finished run."""
    pmf_a, pmf_b, histogram = empirical_distributions(outcomes)
    return SimSummary(
        params=params,
        config=config,
        functional_estimates=[estimate_functional(outcomes, q) for q in config.query_points],
        pmf_a=pmf_a,
        pmf_b=pmf_b,
        tau_histogram=histogram,
        win_counts=win_counts(outcomes),
        mean_tau=float(outcomes.tau_rho.mean()),
        mean_a=float(outcomes.a_rho.mean()),
        mean_b=float(outcomes.b_rho.mean()),
    )


def simulate_batch(params: GameParams, config: SimConfig) -> SimSummary:
    """Run a simulation and summarise it."""
    return summarize(params, config, simulate_outcomes(params, config))
