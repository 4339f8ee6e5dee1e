"""Marginal transforms of tau_rho, A_rho and B_rho.

The marginals are specialisations of the closed-form joint transform. The
F, G and H sum forms are kept as independent cross-check evaluators; all of
them share the shape gamma / (gamma + s) * [b**M + C**N * sum_j C(N+j-1, j) a**j (1 - b**(M-j))].
"""

import numpy as np

from delayedgame.models import GameParams, TransformQuery
from delayedgame.series import binomial_weights, powers

from .main import _phi_closed_value, _require_closed_form, phi_closed
from .models import MarginalIntermediates, Moments

FINITE_DIFFERENCE_STEP = 1e-5


def marginal_tau_lst(params: GameParams, theta: complex) -> complex:
    """E[exp(-theta tau_rho)] = Phi(1, 1, theta)."""
    return phi_closed(params, TransformQuery(theta=theta))


def marginal_A_pgf(params: GameParams, u: complex) -> complex:  # noqa: N802
    """E[u^A_rho] = Phi(u, 1, 0)."""
    return phi_closed(params, TransformQuery(u=u))


def marginal_B_pgf(params: GameParams, v: complex) -> complex:  # noqa: N802
    """E[v^B_rho] = Phi(1, v, 0)."""
    return phi_closed(params, TransformQuery(v=v))


def _weighted_tail_sum(n: int, m: int, a: complex, b: complex) -> complex:
    """sum_{j<M} C(N+j-1, j) a**j (1 - b**(M-j))."""
    b_pow = powers(b, m)
    tails = 1.0 - b_pow[m:0:-1]
    return complex(np.dot(binomial_weights(n, m - 1) * powers(a, m - 1), tails))


def marginal_intermediates(
    params: GameParams, u: complex = 1.0, v: complex = 1.0, theta: complex = 0.0
) -> MarginalIntermediates:
    """F at theta, G at u, H and b at v."""
    _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    m, n = params.threshold_a, params.threshold_b
    b_marg = lam / (lam + mu * (1 - v))
    return MarginalIntermediates(
        f_sum=_weighted_tail_sum(n, m, lam / (lam + mu + theta), lam / (lam + theta)),
        g_sum=_weighted_tail_sum(n, m, lam * u / (lam + mu), u),
        h_sum=_weighted_tail_sum(n, m, lam / (lam + mu), b_marg),
        b_marg=b_marg,
    )


def tau_lst_example(params: GameParams, theta: complex) -> complex:
    """gamma / (gamma + theta) * [(lambda / (lambda + theta))**M + (mu / (lambda + mu + theta))**N * F]."""
    gam = _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    f_sum = marginal_intermediates(params, theta=theta).f_sum
    leading = gam / (gam + theta)
    return complex(
        leading
        * (
            (lam / (lam + theta)) ** params.threshold_a
            + (mu / (lam + mu + theta)) ** params.threshold_b * f_sum
        )
    )


def tau_lst_as_printed(params: GameParams, theta: complex) -> complex:
    """The marginal LST of tau_rho with the F term left out, kept to quantify that omission."""
    gam = _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    return complex(
        gam
        / (gam + theta)
        * (
            (lam / (lam + theta)) ** params.threshold_a
            + (mu / (lam + mu + theta)) ** params.threshold_b
        )
    )


def a_pgf_example(params: GameParams, u: complex) -> complex:
    """gamma / (gamma + lambda (1 - u)) * [u**M + (mu / (lambda + mu))**N * G]."""
    gam = _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    g_sum = marginal_intermediates(params, u=u).g_sum
    return complex(
        gam
        / (gam + lam * (1 - u))
        * (u**params.threshold_a + (mu / (lam + mu)) ** params.threshold_b * g_sum)
    )


def b_pgf_example(params: GameParams, v: complex) -> complex:
    """gamma / (gamma + mu (1 - v)) * [b**M + (mu v / (lambda + mu))**N * H]."""
    gam = _require_closed_form(params)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    inter = marginal_intermediates(params, v=v)
    return complex(
        gam
        / (gam + mu * (1 - v))
        * (
            inter.b_marg**params.threshold_a
            + (mu * v / (lam + mu)) ** params.threshold_b * inter.h_sum
        )
    )


def moments(params: GameParams, h: float = FINITE_DIFFERENCE_STEP) -> Moments:
    """E[tau_rho], E[A_rho] and E[B_rho] by central differences of the closed form at (1, 1, 0)."""
    _require_closed_form(params)

    def value(u: float, v: float, theta: float) -> float:
        return _phi_closed_value(params, u, v, theta)[0].real

    return Moments(
        mean_tau=-(value(1, 1, h) - value(1, 1, -h)) / (2 * h),
        mean_a=(value(1 + h, 1, 0) - value(1 - h, 1, 0)) / (2 * h),
        mean_b=(value(1, 1 + h, 0) - value(1, 1 - h, 0)) / (2 * h),
    )
