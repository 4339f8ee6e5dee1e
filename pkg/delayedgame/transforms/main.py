"""Joint transform of the observed ruin time and the terminal casualties.

Phi(u, v, theta) = E[u^A_rho v^B_rho exp(-theta tau_rho)] is computed by two
independent routes:

* `phi_operator`: 1 - [1 - gamma(u, v, theta)] D^{M-1,N-1}{1 / (1 - gamma(ux, vy, theta))},
  with the inner function expanded as a bivariate series (rational laws) or
  through Cauchy sums (deterministic observations);
* `phi_closed`: the closed form available for exponential observations.
"""

import logging

import numpy as np
from numpy.typing import NDArray

from delayedgame.exceptions import NotClosedFormCapable, QueryDomainError
from delayedgame.models import (
    DeterministicLaw,
    ErlangLaw,
    ExponentialLaw,
    GameParams,
    TransformQuery,
)
from delayedgame.series import (
    BivariateSeries,
    d_op_from_series,
    d_op_geometric,
    d_op_product,
    d_op_via_cauchy,
)

from .models import ClosedFormIntermediates

logger = logging.getLogger(__name__)


def _composite_argument(params: GameParams, u: complex, v: complex, theta: complex) -> complex:
    """theta + lambda (1 - u) + mu (1 - v): the point at which the law's LST is taken."""
    return theta + params.attack_rate_a * (1 - u) + params.attack_rate_b * (1 - v)


def gamma_joint(params: GameParams, q: TransformQuery) -> complex:
    """gamma(u, v, theta) = E[u^X_1 v^Y_1 exp(-theta tau_1)] = LST_Delta(theta + lambda(1-u) + mu(1-v))."""
    return complex(params.delta_law.lst(_composite_argument(params, q.u, q.v, q.theta)))


def _require_closed_form(params: GameParams) -> float:
    if not params.closed_form_capable:
        raise NotClosedFormCapable(
            f"Closed forms need exponential observations, got {params.delta_law.type}."
        )
    return params.observation_rate


def _psi(a: complex, b: complex, c_big: complex, m: int, n: int) -> complex:
    """psi = (1 - b^M)/(1 - b) - C^N/(1 - b) sum_j C(N+j-1, j)[a^j - b^M (a/b)^j]."""
    return d_op_geometric(m - 1, b) - c_big**n * d_op_product(m - 1, a, b, n)


def _intermediates(
    lam: float, mu: float, m: int, n: int, u: complex, v: complex, theta: complex
) -> ClosedFormIntermediates:
    p = lam + mu + theta
    a = lam * u / p
    b = lam * u / (p - mu * v)
    c_big = mu * v / p
    return ClosedFormIntermediates(p=p, a=a, b=b, c_big=c_big, psi=_psi(a, b, c_big, m, n))


def _phi_closed_value(
    params: GameParams, u: complex, v: complex, theta: complex
) -> tuple[complex, ClosedFormIntermediates]:
    """Closed form without domain checks, also used off-domain for finite differences."""
    gam = _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    inter = _intermediates(lam, mu, params.threshold_a, params.threshold_b, u, v, theta)
    s = _composite_argument(params, u, v, theta)
    leading = gam / (gam + s)
    value = leading * (1 - s / (lam + mu * (1 - v) + theta) * inter.psi)
    return complex(value), inter


def closed_form_intermediates(params: GameParams, q: TransformQuery) -> ClosedFormIntermediates:
    """p, a, b, C and psi at the query point."""
    return _phi_closed_value(params, q.u, q.v, q.theta)[1]


def phi_closed(
    params: GameParams, q: TransformQuery, origin_shortcut: bool = True
) -> complex:
    """Closed-form Phi(u, v, theta) for exponentially distributed observation gaps.

    At (1, 1, 0) the value 1 is returned directly unless `origin_shortcut` is off.
    """
    if origin_shortcut and q.is_origin_of_mass:
        _require_closed_form(params)
        return 1.0 + 0.0j
    return _phi_closed_value(params, q.u, q.v, q.theta)[0]


def _inner_function_series(params: GameParams, q: TransformQuery) -> BivariateSeries:
    """Series of 1 / (1 - gamma(ux, vy, theta)) truncated at orders (M - 1, N - 1)."""
    law = params.delta_law
    kx, ky = params.threshold_a - 1, params.threshold_b - 1
    lam, mu = params.attack_rate_a, params.attack_rate_b
    # gamma(ux, vy, theta) = LST(p - lambda u x - mu v y) with p = theta + lambda + mu
    p = q.theta + lam + mu
    if isinstance(law, ExponentialLaw):
        rate, shape = law.rate, 1
    elif isinstance(law, ErlangLaw):
        rate, shape = law.rate, law.shape
    else:
        raise TypeError(f"No rational series for {law.type} observations.")
    denominator = BivariateSeries.linear(
        (rate + p) / rate, -lam * q.u / rate, -mu * q.v / rate, kx, ky
    )
    gamma_series = denominator.reciprocal() ** shape
    return (1.0 - gamma_series).reciprocal()


def _inner_function(params: GameParams, q: TransformQuery):
    lam, mu = params.attack_rate_a, params.attack_rate_b
    law = params.delta_law

    def inner(x: NDArray[np.complex128], y: NDArray[np.complex128]) -> NDArray[np.complex128]:
        s = q.theta + lam * (1 - q.u * x) + mu * (1 - q.v * y)
        return 1.0 / (1.0 - law.lst(s))

    return inner


def phi_operator(
    params: GameParams, q: TransformQuery, origin_shortcut: bool = True
) -> complex:
    """Phi(u, v, theta) through the D-operator pipeline; valid for every observation law."""
    if origin_shortcut and q.is_origin_of_mass:
        return 1.0 + 0.0j
    k, m = params.threshold_a - 1, params.threshold_b - 1
    if isinstance(params.delta_law, DeterministicLaw):
        logger.debug("Deterministic observations: Cauchy extraction for D^(%d,%d)", k, m)
        d_value = d_op_via_cauchy(_inner_function(params, q), k, m)
    else:
        d_value = d_op_from_series(_inner_function_series(params, q), k, m)
    return 1.0 - (1.0 - gamma_joint(params, q)) * d_value


def phi(params: GameParams, q: TransformQuery) -> complex:
    """Phi(u, v, theta) by the closed form when available, otherwise by the operator pipeline."""
    if params.closed_form_capable:
        return phi_closed(params, q)
    return phi_operator(params, q)


def phi_exponential_casualties(
    params: GameParams, s: complex, v: complex, theta: complex
) -> complex:
    """E[exp(-s A_rho) v^B_rho exp(-theta tau_rho)] for Re(s) >= 0."""
    if s.real < 0:
        raise QueryDomainError(f"Re(s) must be >= 0, got {s.real}.")
    u = 1.0 + 0.0j if s == 0 else complex(np.exp(-s))
    return phi(params, TransformQuery(u=u, v=v, theta=theta))
