"""Distances between distributions used by the acceptance checks."""

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from delayedgame.inversion import DistributionTable

# Asymptotic one-sample Kolmogorov-Smirnov critical value at the 1% level, times sqrt(n).
KS_CRITICAL_1PCT = 1.63


def total_variation(p: DistributionTable | ArrayLike, q: DistributionTable | ArrayLike) -> float:
    """1/2 sum_k |p(k) - q(k)| over the union of both supports."""
    p_arr = p.as_array() if isinstance(p, DistributionTable) else np.asarray(p, dtype=np.float64)
    q_arr = q.as_array() if isinstance(q, DistributionTable) else np.asarray(q, dtype=np.float64)
    size = max(len(p_arr), len(q_arr))
    p_arr = np.pad(p_arr, (0, size - len(p_arr)))
    q_arr = np.pad(q_arr, (0, size - len(q_arr)))
    return 0.5 * float(np.abs(p_arr - q_arr).sum())


def ks_statistic(samples: ArrayLike, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """sup_t |F_n(t) - F(t)| for the empirical CDF of `samples`."""
    return float(stats.kstest(np.asarray(samples), cdf).statistic)


def ks_critical_value(n: int) -> float:
    """1%-level critical value of the one-sample KS distance for n samples."""
    return KS_CRITICAL_1PCT / np.sqrt(n)


def tv_tolerance(n: int) -> float:
    """Allowed total-variation distance between an exact pmf and an n-sample empirical pmf."""
    return max(0.005, 2.5 / np.sqrt(n))


def pooled_counts(
    first: np.ndarray, second: np.ndarray, min_expected: float = 5.0
) -> np.ndarray:
    """2 x K contingency table of two integer samples.

    Neighbouring values are merged until every cell has an expected count of at
    least `min_expected` under homogeneity.
    """
    top = int(max(first.max(), second.max()))
    table = np.vstack(
        [np.bincount(first, minlength=top + 1), np.bincount(second, minlength=top + 1)]
    )
    share = table.sum(axis=1).min() / table.sum()
    cells: list[np.ndarray] = []
    current = np.zeros(2, dtype=np.int64)
    for column in table.T:
        current = current + column
        if current.sum() * share >= min_expected:
            cells.append(current)
            current = np.zeros(2, dtype=np.int64)
    if current.any():
        if cells:
            cells[-1] = cells[-1] + current
        else:
            cells.append(current)
    return np.column_stack(cells)
