"""The D-operator and its closed forms.

For phi analytic at the origin, D^{k,m}_{x,y} phi is the (k, m)-th Taylor
coefficient of phi(x, y) / ((1 - x)(1 - y)), i.e. the partial sum of the
coefficients c_ij of phi over i <= k, j <= m; it is 0 when k < 0 or m < 0.
"""

import logging
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from delayedgame.const import (
    BRANCH_TOLERANCE,
    CAUCHY_MIN_GRID,
    CAUCHY_RADIUS,
    NEAR_ONE_WINDOW,
    ZERO_TOLERANCE,
)

from .exceptions import GridTooCoarse, TruncationTooSmall
from .series import BivariateSeries

logger = logging.getLogger(__name__)

BivariateFunction = Callable[[NDArray[np.complex128], NDArray[np.complex128]], NDArray]


def powers(z: complex, k: int) -> NDArray[np.complex128]:
    """[1, z, z**2, ..., z**k] by repeated multiplication."""
    factors = np.full(k + 1, z, dtype=np.complex128)
    factors[0] = 1.0
    return np.cumprod(factors)


def binomial_weights(n: int, k: int) -> NDArray[np.float64]:
    """[C(n + j - 1, j) for j = 0..k], the coefficients of 1 / (1 - x)**n."""
    j = np.arange(1, k + 1, dtype=np.float64)
    ratios = np.concatenate(([1.0], (n + j - 1.0) / j))
    return np.cumprod(ratios)


def geometric_partial_sums(k: int, b: complex) -> NDArray[np.complex128]:
    """[sum_{i<=r} b**i for r = 0..k].

    Near b = 1 the closed form (1 - b**(r+1)) / (1 - b) cancels, so the sums are
    accumulated term by term there and replaced by the two-term expansion
    (r + 1) + (b - 1) r (r + 1) / 2 inside the branch window.
    """
    r = np.arange(k + 1, dtype=np.float64)
    gap = b - 1.0
    if abs(gap) <= BRANCH_TOLERANCE:
        return (r + 1.0) + gap * r * (r + 1.0) / 2.0
    if abs(gap) < NEAR_ONE_WINDOW:
        return np.cumsum(powers(b, k))
    return (1.0 - powers(b, k + 1)[1:]) / (1.0 - b)


def series_reciprocal(s: BivariateSeries) -> BivariateSeries:
    """1 / s on the retained grid; raises SingularConstantTerm when c_00 vanishes."""
    return s.reciprocal()


def d_op_from_series(s: BivariateSeries, k: int, m: int) -> complex:
    """D^{k,m} of the function whose Taylor coefficients are held by `s`."""
    if k < 0 or m < 0:
        return 0j
    if k > s.max_deg_x or m > s.max_deg_y:
        raise TruncationTooSmall(
            f"D^({k},{m}) needs orders ({k}, {m}); series has ({s.max_deg_x}, {s.max_deg_y})."
        )
    return complex(np.sum(s.coeffs[: k + 1, : m + 1]))


def d_op_x(s: BivariateSeries, k: int) -> BivariateSeries:
    """D^k_x applied to s: a series in y alone (orders (0, max_deg_y))."""
    if k < 0:
        return BivariateSeries.zeros(0, s.max_deg_y)
    if k > s.max_deg_x:
        raise TruncationTooSmall(f"D_x^{k} needs x-order {k}; series has {s.max_deg_x}.")
    return BivariateSeries(np.sum(s.coeffs[: k + 1, :], axis=0, keepdims=True))


def d_op_y(s: BivariateSeries, m: int) -> BivariateSeries:
    """D^m_y applied to s: a series in x alone (orders (max_deg_x, 0))."""
    if m < 0:
        return BivariateSeries.zeros(s.max_deg_x, 0)
    if m > s.max_deg_y:
        raise TruncationTooSmall(f"D_y^{m} needs y-order {m}; series has {s.max_deg_y}.")
    return BivariateSeries(np.sum(s.coeffs[:, : m + 1], axis=1, keepdims=True))


def d_op_geometric(k: int, b: complex) -> complex:
    """D^k_x {1 / (1 - b x)} = (1 - b**(k+1)) / (1 - b), or k + 1 at b = 1."""
    if k < 0:
        return 0j
    return complex(geometric_partial_sums(k, b)[-1])


def d_op_power(k: int, a: complex, n: int) -> complex:
    """D^k_x {1 / (1 - a x)**n} = sum_{j<=k} C(n + j - 1, j) a**j."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}.")
    if k < 0:
        return 0j
    if a == 1 and n == 1:
        return complex(k + 1)
    return complex(np.dot(binomial_weights(n, k), powers(a, k)))


def d_op_product(k: int, a: complex, b: complex, n: int) -> complex:
    """D^k_x {1 / ((1 - b x)(1 - a x)**n)}.

    Evaluated as sum_j C(n + j - 1, j) a**j * D^{k-j}_x {1 / (1 - b x)}, which
    equals (1 / (1 - b)) sum_j C(n + j - 1, j) (a**j - b**(k+1) (a / b)**j) for
    b != 1 and sum_j C(n + j - 1, j) a**j (k - j + 1) for b = 1.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}.")
    if k < 0:
        return 0j
    if abs(b) <= ZERO_TOLERANCE:
        return d_op_power(k, a, n)
    tails = geometric_partial_sums(k, b)[::-1]
    return complex(np.dot(binomial_weights(n, k) * powers(a, k), tails))


def cauchy_series(
    f: BivariateFunction, max_deg_x: int, max_deg_y: int, radius: float, grid: int
) -> BivariateSeries:
    """Taylor coefficients of f by 2-D discrete Fourier sums on the torus |x| = |y| = radius.

    The aliasing error of c_ij is of order radius**(grid - max(i, j)) times the
    size of f on the torus.
    """
    if not 0.0 < radius < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {radius}.")
    needed = max(1, 4 * max(max_deg_x, max_deg_y))
    if grid < needed:
        raise GridTooCoarse(f"grid={grid} is below 4 * max(k, m) = {needed}.")
    nodes = radius * np.exp(2j * np.pi * np.arange(grid) / grid)
    x, y = np.meshgrid(nodes, nodes, indexing="ij")
    values = np.asarray(f(x, y), dtype=np.complex128)
    coeffs = np.fft.fft2(values) / grid**2
    coeffs = coeffs[: max_deg_x + 1, : max_deg_y + 1]
    scale = radius ** -np.add.outer(np.arange(max_deg_x + 1), np.arange(max_deg_y + 1))
    logger.debug("Cauchy extraction: orders (%d, %d), grid %d", max_deg_x, max_deg_y, grid)
    return BivariateSeries(coeffs * scale)


def d_op_via_cauchy(
    f: BivariateFunction,
    k: int,
    m: int,
    radius: float = CAUCHY_RADIUS,
    grid: int | None = None,
) -> complex:
    """D^{k,m} of an analytic function known only through point evaluations."""
    if k < 0 or m < 0:
        return 0j
    if grid is None:
        grid = max(CAUCHY_MIN_GRID, 4 * max(k, m))
    return d_op_from_series(cauchy_series(f, k, m, radius, grid), k, m)
