"""Distributions of tau_rho, A_rho and B_rho recovered from their transforms."""

import logging
from collections import Counter
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import nbinom

from delayedgame.const import IMAGINARY_RESIDUE_TOLERANCE, PMF_FFT_NEGATIVE_WARNING
from delayedgame.enums import DistributionKind, Provenance, Side
from delayedgame.exceptions import NotClosedFormCapable
from delayedgame.models import DeterministicLaw, GameParams, TransformQuery
from delayedgame.series import GridTooCoarse, binomial_weights
from delayedgame.transforms import phi

from .exceptions import NoDensity
from .laplace import ErlangMixture, laplace_invert_numeric
from .models import DefeatProbabilities, DistributionTable, RationalLstTerm

logger = logging.getLogger(__name__)

GeneratingFunction = Callable[[complex], complex]

# Extra pmf points beyond M + N; the aliased tail is then below 1e-9.
PMF_TAIL_MARGIN = 50


def tau_lst_terms(params: GameParams) -> list[RationalLstTerm]:
    """E[exp(-theta tau_rho)] as a sum of rational terms in theta.

    gamma lambda^M / ((gamma + theta)(lambda + theta)^M)
      + sum_{j<M} C(N+j-1, j) gamma lambda^j mu^N / ((gamma + theta)(lambda + mu + theta)^(N+j))
      - sum_{j<M} C(N+j-1, j) gamma lambda^M mu^N / ((gamma + theta)(lambda + theta)^(M-j)(lambda + mu + theta)^(N+j))
    """
    if not params.closed_form_capable:
        raise NotClosedFormCapable("Rational tau transforms need exponential observations.")
    gam = params.observation_rate
    lam, mu = params.attack_rate_a, params.attack_rate_b
    m, n = params.threshold_a, params.threshold_b
    poles = {"gamma_pole": gam, "pole1": lam, "pole2": lam + mu}
    terms = [RationalLstTerm(coeff=gam * lam**m, mult1=m, mult2=0, **poles)]
    for j, weight in enumerate(binomial_weights(n, m - 1)):
        terms.append(
            RationalLstTerm(coeff=weight * gam * lam**j * mu**n, mult1=0, mult2=n + j, **poles)
        )
        terms.append(
            RationalLstTerm(
                coeff=-weight * gam * lam**m * mu**n, mult1=m - j, mult2=n + j, **poles
            )
        )
    return terms


def _stages(*pairs: tuple[float, int]) -> dict[float, int]:
    """Erlang stages keyed by rate; coinciding rates add their multiplicities."""
    stages: Counter[float] = Counter()
    for pole, mult in pairs:
        stages[pole] += mult
    return dict(stages)


@lru_cache(maxsize=32)
def _tau_mixture(params: GameParams) -> ErlangMixture:
    """tau_rho as an Erlang mixture, uniformized at rate lambda + mu + gamma.

    The components are those of `tau_lst_terms`, each normalised to a law; their
    weights are negative binomial probabilities and never overflow.
    """
    if not params.closed_form_capable:
        raise NotClosedFormCapable("The exact tau law needs exponential observations.")
    gam = params.observation_rate
    lam, mu = params.attack_rate_a, params.attack_rate_b
    m, n = params.threshold_a, params.threshold_b
    weights = nbinom.pmf(np.arange(m), n, mu / (lam + mu))
    components: list[tuple[float, dict[float, int]]] = [(1.0, _stages((gam, 1), (lam, m)))]
    for j, weight in enumerate(weights):
        components.append((float(weight), _stages((gam, 1), (lam + mu, n + j))))
        components.append((-float(weight), _stages((gam, 1), (lam, m - j), (lam + mu, n + j))))
    return ErlangMixture.from_stages(components, rate=lam + mu + gam)


def tau_pdf(params: GameParams, t: ArrayLike) -> NDArray[np.float64] | float:
    """Density of the observed ruin time, exact (Poisson-weighted Erlang mixture)."""
    return _tau_mixture(params).pdf(t)


def tau_cdf(params: GameParams, t: ArrayLike) -> NDArray[np.float64] | float:
    """P(tau_rho <= t), exact."""
    return _tau_mixture(params).cdf(t)


def _require_density(params: GameParams) -> None:
    if isinstance(params.delta_law, DeterministicLaw):
        raise NoDensity(
            f"tau_rho is a multiple of d={params.delta_law.d}; it has no density to invert."
        )


def _tau_lst(params: GameParams) -> GeneratingFunction:
    def lst(theta: complex) -> complex:
        return phi(params, TransformQuery(theta=theta))

    return lst


def tau_pdf_numeric(params: GameParams, t: float) -> float:
    """Density of tau_rho by numeric inversion of its LST; works for every continuous observation law."""
    _require_density(params)
    return laplace_invert_numeric(_tau_lst(params), t)


def tau_cdf_numeric(params: GameParams, t: float) -> float:
    """P(tau_rho <= t) by numeric inversion of LST(theta) / theta."""
    _require_density(params)
    lst = _tau_lst(params)
    return laplace_invert_numeric(lambda theta: lst(theta) / theta, t)


def tau_pdf_table(
    params: GameParams, t_grid: ArrayLike, method: str = "exact"
) -> DistributionTable:
    """Density of tau_rho sampled on a grid.

    method "exact" uses the Erlang mixture, "numeric" the Euler inversion, which
    reports the limit 0 at t = 0. The metadata carries the mass beyond the grid
    when the exact CDF is available.
    """
    grid = np.asarray(t_grid, dtype=np.float64)
    if method == "exact":
        values = np.atleast_1d(tau_pdf(params, grid))
        provenance = Provenance.ANALYTIC
    elif method == "numeric":
        _require_density(params)
        lst = _tau_lst(params)
        values = np.array(
            [laplace_invert_numeric(lst, float(t)) if t > 0 else 0.0 for t in grid]
        )
        provenance = Provenance.NUMERIC
    else:
        raise ValueError(f"Unknown inversion method {method!r}.")
    tail = 1.0 - float(tau_cdf(params, grid[-1])) if params.closed_form_capable else None
    return DistributionTable(
        kind=DistributionKind.PDF,
        provenance=provenance,
        support=grid.tolist(),
        values=values.tolist(),
        metadata={"method": method, "tail_mass": tail},
    )


def pgf_to_pmf(
    g: GeneratingFunction, max_k: int, radius: float = 1.0, n_points: int | None = None
) -> DistributionTable:
    """pmf(k) for k <= max_k from a PGF, by discrete Fourier sums on |u| = radius.

    pmf(k) = (1/n) sum_j g(r w^j) w^(-jk) / r^k with w = exp(2 pi i / n).
    """
    if max_k < 0:
        raise ValueError(f"max_k must be >= 0, got {max_k}.")
    if n_points is None:
        n_points = max(4 * max_k, 4)
    if n_points < 4 * max_k:
        raise GridTooCoarse(f"n_points={n_points} is below 4 * max_k = {4 * max_k}.")
    nodes = radius * np.exp(2j * np.pi * np.arange(n_points) / n_points)
    samples = np.array([g(complex(z)) for z in nodes], dtype=np.complex128)
    coeffs = np.fft.fft(samples)[: max_k + 1] / n_points / radius ** np.arange(max_k + 1)
    residue = float(np.max(np.abs(coeffs.imag)))
    if residue > IMAGINARY_RESIDUE_TOLERANCE:
        logger.warning("pmf extraction left imaginary parts up to %.3g", residue)
    masses = coeffs.real
    lowest = float(masses.min())
    if lowest < -PMF_FFT_NEGATIVE_WARNING:
        logger.warning("pmf extraction produced negative mass %.3g; clipped", lowest)
    return DistributionTable(
        kind=DistributionKind.PMF,
        provenance=Provenance.ANALYTIC,
        support=list(range(max_k + 1)),
        values=np.clip(masses, 0.0, None).tolist(),
        metadata={"n_points": n_points, "radius": radius},
    )


def default_max_k(params: GameParams) -> int:
    """Truncation point of analytic casualty pmfs."""
    return params.threshold_a + params.threshold_b + PMF_TAIL_MARGIN


def casualty_pmf(params: GameParams, side: Side, max_k: int | None = None) -> DistributionTable:
    """Analytic pmf of A_rho (side A) or B_rho (side B) from the marginal PGF."""
    side = Side(side)
    if max_k is None:
        max_k = default_max_k(params)

    def pgf(z: complex) -> complex:
        query = TransformQuery(u=z) if side == Side.A else TransformQuery(v=z)
        return phi(params, query)

    table = pgf_to_pmf(pgf, max_k)
    deterministic = isinstance(params.delta_law, DeterministicLaw)
    provenance = Provenance.NUMERIC if deterministic else Provenance.ANALYTIC
    return table.model_copy(
        update={"provenance": provenance, "metadata": {**table.metadata, "side": side.value}}
    )


def defeat_probabilities(params: GameParams, max_k: int | None = None) -> DefeatProbabilities:
    """P(A_rho >= M), P(B_rho >= N) and P(both) from the analytic casualty pmfs.

    At the ruin time at least one threshold is crossed, so P(both) = P(A) + P(B) - 1.
    """
    pmf_a = casualty_pmf(params, Side.A, max_k).as_array()
    pmf_b = casualty_pmf(params, Side.B, max_k).as_array()
    a_defeated = 1.0 - float(pmf_a[: params.threshold_a].sum())
    b_defeated = 1.0 - float(pmf_b[: params.threshold_b].sum())
    return DefeatProbabilities(
        a_defeated=a_defeated,
        b_defeated=b_defeated,
        both=max(0.0, a_defeated + b_defeated - 1.0),
    )
