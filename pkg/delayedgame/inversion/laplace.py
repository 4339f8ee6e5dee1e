"""Inverse Laplace transforms: exact for rational transforms, numeric as an oracle.

Rational transforms coeff / prod_q (q + theta)**k_q are inverted by residues.
Around a pole p of multiplicity k, with theta = -p + h,

    F = coeff * h**-k * G(h),    G(h) = prod_{q != p} (h + (q - p))**-k_q,

and the contribution of p is exp(-p t) * sum_{r<k} g_{k-1-r} t**r / r!, where
g_j are the Taylor coefficients of coeff * G at h = 0.
"""

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from typing_extensions import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import comb, gammainc
from scipy.stats import poisson

from delayedgame.const import (
    EULER_A,
    EULER_AVERAGING,
    EULER_CONVERGENCE_TOLERANCE,
    EULER_TERMS,
    MIXTURE_BLOCK,
    PHASE_TAIL_SPREAD,
    POISSON_WINDOW,
    POLE_SEPARATION,
)
from delayedgame.series import binomial_weights

from .exceptions import NonConvergent, PolesTooClose
from .models import RationalLstTerm

logger = logging.getLogger(__name__)

LaplaceTransform = Callable[[complex], complex]


class ExponentialPolynomial:
    """f(t) = sum over poles p of exp(-p t) * sum_r c_r t**r."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[float, ArrayLike] | None = None):
        self._terms: dict[float, NDArray[np.complex128]] = {
            pole: np.asarray(coeffs, dtype=np.complex128) for pole, coeffs in (terms or {}).items()
        }

    @property
    def terms(self) -> dict[float, NDArray[np.complex128]]:
        """Polynomial coefficients (ascending powers of t) per pole."""
        return dict(self._terms)

    def __add__(self, other: "ExponentialPolynomial") -> Self:
        merged = dict(self._terms)
        for pole, coeffs in other._terms.items():
            if pole not in merged:
                merged[pole] = coeffs
                continue
            size = max(len(coeffs), len(merged[pole]))
            merged[pole] = np.pad(merged[pole], (0, size - len(merged[pole]))) + np.pad(
                coeffs, (0, size - len(coeffs))
            )
        return type(self)(merged)

    def __call__(self, t: ArrayLike) -> NDArray[np.float64] | float:
        t_arr = np.asarray(t, dtype=np.float64)
        total = np.zeros_like(t_arr, dtype=np.complex128)
        for pole, coeffs in self._terms.items():
            total += np.exp(-pole * t_arr) * np.polynomial.polynomial.polyval(t_arr, coeffs)
        result = total.real
        return float(result) if result.ndim == 0 else result


def _check_separation(poles: Mapping[float, int]) -> None:
    locations = sorted(poles)
    for left, right in zip(locations, locations[1:]):
        if right - left <= POLE_SEPARATION:
            raise PolesTooClose(f"Poles {left} and {right} are closer than {POLE_SEPARATION}.")


def _shifted_factor(gap: float, mult: int, order: int) -> NDArray[np.float64]:
    """Taylor coefficients of (h + gap)**-mult at h = 0 up to h**order."""
    signs = (-1.0) ** np.arange(order + 1)
    return binomial_weights(mult, order) * signs * float(gap) ** -(mult + np.arange(order + 1))


def residue_expansion(coeff: complex, poles: Mapping[float, int]) -> ExponentialPolynomial:
    """Inverse Laplace transform of coeff / prod_q (q + theta)**poles[q]."""
    poles = {pole: mult for pole, mult in poles.items() if mult > 0}
    _check_separation(poles)
    terms = {}
    for pole, mult in poles.items():
        order = mult - 1
        g = np.zeros(order + 1, dtype=np.complex128)
        g[0] = coeff
        for other, other_mult in poles.items():
            if other == pole:
                continue
            g = np.convolve(g, _shifted_factor(other - pole, other_mult, order))[: order + 1]
        r = np.arange(mult)
        factorials = np.array([math.factorial(i) for i in r], dtype=np.float64)
        terms[pole] = g[order - r] / factorials
    return ExponentialPolynomial(terms)


StageMixture = Sequence[tuple[float, Mapping[float, int]]]


def _phase_count_moments(stages: Mapping[float, int], rate: float) -> tuple[float, float]:
    """Mean and variance of the number of rate-`rate` phases in a sum of Erlang stages."""
    mean = variance = 0.0
    for pole, mult in stages.items():
        share = pole / rate
        mean += mult / share
        variance += mult * (1.0 - share) / share**2
    return mean, variance


class ErlangMixture:
    """The law sum_k weights[k] * Erlang(k, rate), Erlang(0, rate) being the atom at 0.

    Densities and distribution functions are Poisson-weighted sums,

        f(t) = rate * sum_j pois(j; rate t) weights[j + 1],
        F(t) = sum_j pois(j; rate t) (weights[0] + ... + weights[j]),

    whose terms stay bounded by the weights whatever the Erlang orders.
    """

    __slots__ = ("rate", "weights")

    def __init__(self, rate: float, weights: ArrayLike):
        self.rate = float(rate)
        self.weights = np.asarray(weights, dtype=np.float64)

    @classmethod
    def from_stages(cls, components: StageMixture, rate: float | None = None) -> Self:
        """Mixture equal to sum_i c_i * law(sum of Erlang(mult, pole) over stages_i).

        In z = rate / (rate + theta) every factor pole / (pole + theta) becomes
        q z / (1 - (1 - q) z) with q = pole / rate <= 1, so the transform is a power
        series in z. It is sampled on the unit circle and its coefficients, the
        weights, are recovered by FFT.
        """
        poles = [pole for _, stages in components for pole in stages]
        rate = max(poles) if rate is None else rate
        if rate < max(poles):
            raise ValueError(f"rate {rate} is below the largest pole {max(poles)}.")
        size = 64.0
        for _, stages in components:
            mean, variance = _phase_count_moments(stages, rate)
            size = max(size, mean + PHASE_TAIL_SPREAD * math.sqrt(variance) + 64.0)
        n_points = 1 << math.ceil(math.log2(size))
        z = np.exp(2j * np.pi * np.arange(n_points) / n_points)
        pgf = np.zeros(n_points, dtype=np.complex128)
        for coefficient, stages in components:
            term = np.full(n_points, coefficient, dtype=np.complex128)
            for pole, mult in stages.items():
                term *= (pole * z / (rate - (rate - pole) * z)) ** mult
            pgf += term
        logger.debug("Erlang mixture at rate %g over %d phase counts", rate, n_points)
        return cls(rate, np.fft.fft(pgf).real / n_points)

    def _poisson_sum(
        self, values: NDArray[np.float64], fill: float, t: ArrayLike
    ) -> NDArray[np.float64] | float:
        """sum_j pois(j; rate t) values[j], values[j] = fill beyond the table."""
        t_arr = np.asarray(t, dtype=np.float64)
        x = self.rate * t_arr.ravel()
        out = np.empty_like(x)
        last = len(values) - 1
        order = np.argsort(x)
        for start in range(0, len(x), MIXTURE_BLOCK):
            idx = order[start : start + MIXTURE_BLOCK]
            xb = x[idx]
            spread = POISSON_WINDOW * np.sqrt(xb) + 20.0
            # windows past the table start at its end and only carry the fill
            start_at = np.nan_to_num(xb - spread, nan=last + 1.0)
            lo = np.floor(np.clip(start_at, 0.0, last + 1.0)).astype(np.int64)
            top = np.fmin(np.ceil(xb + spread), last).astype(np.int64)
            width = max(int(np.max(top - lo)) + 1, 0)
            j = lo[:, None] + np.arange(width)
            inside = j <= top[:, None]
            terms = poisson.pmf(j, xb[:, None]) * values[np.minimum(j, last)]
            out[idx] = np.where(inside, terms, 0.0).sum(axis=1) + fill * poisson.sf(last, xb)
        result = out.reshape(t_arr.shape)
        return float(result) if result.ndim == 0 else result

    def pdf(self, t: ArrayLike) -> NDArray[np.float64] | float:
        """Density at t >= 0."""
        return self._poisson_sum(self.rate * self.weights[1:], 0.0, t)

    def cdf(self, t: ArrayLike) -> NDArray[np.float64] | float:
        """Distribution function at t >= 0."""
        return self._poisson_sum(np.cumsum(self.weights), float(self.weights.sum()), t)


def erlang_tail(n: int, x: float) -> float:
    """P(n, x) = 1 - exp(-x) sum_{i<n} x**i / i!, the regularized lower gamma function.

    Negative x is allowed; the value is then outside [0, 1].
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}.")
    if x >= 0:
        return float(gammainc(n, x))
    return math.exp(-x) * _exponential_remainder(n, x)


def _exponential_remainder(n: int, x: float) -> float:
    """sum_{i>=n} x**i / i! = exp(x) - sum_{i<n} x**i / i!."""
    if abs(x) < n + 1:
        # terms decrease from i = n on
        term = math.exp(n * math.log(abs(x)) - math.lgamma(n + 1)) if x else 0.0
        if x < 0 and n % 2:
            term = -term
        total, i = term, n
        while term and abs(term) > 1e-17 * abs(total):
            i += 1
            term *= x / i
            total += term
        return total
    term, head = 1.0, 1.0
    for i in range(1, n):
        term *= x / i
        head += term
    return math.exp(x) - head


def invert_gamma_erlang(gamma_pole: float, pole1: float, m: int, t: float) -> float:
    """L^-1{1 / ((gamma + theta)(lambda + theta)**m)}(t) = exp(-gamma t) / (lambda - gamma)**m * P(m, (lambda - gamma) t)."""
    if m == 0:
        return math.exp(-gamma_pole * t)
    gap = pole1 - gamma_pole
    if abs(gap) <= POLE_SEPARATION:
        raise PolesTooClose(f"gamma={gamma_pole} and pole {pole1} coincide.")
    x = gap * t
    if x >= 0:
        return math.exp(-gamma_pole * t) * float(gammainc(m, x)) / gap**m
    # exp(-gamma t) exp(-x) = exp(-lambda t) keeps large t finite
    return math.exp(-pole1 * t) * _exponential_remainder(m, x) / gap**m


def invert_rational_term(term: RationalLstTerm, t: ArrayLike) -> NDArray[np.float64] | float:
    """Exact inverse of one rational term by residues over its (at most three) poles."""
    return residue_expansion(term.coeff, term.poles())(t)


def invert_three_pole_closed(
    gamma_pole: float, pole1: float, m: int, pole2: float, n: int, t: float
) -> float:
    """L^-1{1 / ((gamma + theta)(lambda + theta)**m (alpha + theta)**n)}(t) in closed form.

    1 / ((lambda + theta)**m (alpha + theta)**n) is split into simple powers,

        sum_{k<m} C(n+k-1, k) (-1)**k / (alpha - lambda)**(n+k) / (lambda + theta)**(m-k)
      + sum_{k<n} C(m+k-1, k) (-1)**k / (lambda - alpha)**(m+k) / (alpha + theta)**(n-k),

    and every power is inverted together with 1 / (gamma + theta) by
    :func:`invert_gamma_erlang`.
    """
    if m == 0 or n == 0:
        pole, mult = (pole2, n) if m == 0 else (pole1, m)
        return invert_gamma_erlang(gamma_pole, pole, mult, t)
    if abs(pole1 - pole2) <= POLE_SEPARATION:
        raise PolesTooClose(f"Poles {pole1} and {pole2} coincide.")
    total = 0.0
    for k, weight in enumerate(binomial_weights(n, m - 1)):
        scale = (-1) ** k * weight / (pole2 - pole1) ** (n + k)
        total += scale * invert_gamma_erlang(gamma_pole, pole1, m - k, t)
    for k, weight in enumerate(binomial_weights(m, n - 1)):
        scale = (-1) ** k * weight / (pole1 - pole2) ** (m + k)
        total += scale * invert_gamma_erlang(gamma_pole, pole2, n - k, t)
    return total


def _euler_weights(m: int) -> NDArray[np.float64]:
    """Binomial averaging weights C(m, j) / 2**m."""
    return comb(m, np.arange(m + 1)) / 2.0**m


def laplace_invert_numeric(
    transform: LaplaceTransform,
    t: float,
    a: float = EULER_A,
    n_terms: int = EULER_TERMS,
    averaging: int = EULER_AVERAGING,
) -> float:
    """Numerically invert a Laplace transform at t > 0 with the Euler algorithm.

    Parameters
    ----------
    transform : callable
        F(theta), analytic for Re(theta) > 0.
    t : float
        Time at which to evaluate the inverse, t > 0.
    a : float, default=EULER_A
        Contour shift; the discretisation error is about exp(-a).
    n_terms, averaging : int
        The alternating Bromwich series is summed to n_terms terms and then
        binomially averaged over the next `averaging` partial sums.

    Returns
    -------
    float
        f(t), accurate to about 1e-8 for the smooth transforms of this package.

    Raises
    ------
    NonConvergent
        When the last two Euler averages differ by more than
        EULER_CONVERGENCE_TOLERANCE relative to max(1, |f(t)|).
    """
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}.")
    x = a / (2.0 * t)
    h = math.pi / t
    k = np.arange(1, n_terms + averaging + 1)
    values = np.array([transform(complex(x, h * i)) for i in k], dtype=np.complex128).real
    terms = np.concatenate(([transform(complex(x, 0.0)).real / 2.0], (-1.0) ** k * values))
    partial = np.cumsum(terms)[n_terms:]
    last = float(np.dot(_euler_weights(averaging), partial))
    previous = float(np.dot(_euler_weights(averaging - 1), partial[:-1]))
    scale = math.exp(a / 2.0) / t
    estimate, change = scale * last, scale * abs(last - previous)
    allowed = EULER_CONVERGENCE_TOLERANCE * max(1.0, abs(estimate))
    if not math.isfinite(estimate) or change > allowed:
        raise NonConvergent(f"Euler inversion at t={t} changed by {change:.3g} in its last step.")
    if change > 0.1 * allowed:
        logger.warning("Euler inversion at t=%g is close to non-convergence (%.3g)", t, change)
    return estimate
