"""Monte Carlo engines for the delayed game.

Observation epochs tau_j = tau_{j-1} + Delta_j start from tau_0 = 0 with no
casualties. In interval mode the casualties of window j are drawn as
Poisson(lambda Delta_j) and Poisson(mu Delta_j); in event mode the attack
epochs of both players are generated explicitly and counted per window.

Both engines keep a game running after the exit index rho until both
thresholds have been crossed, so that nu1 and nu2 are known for every path.
The observation cap applies to rho alone: a game that exited but whose other
threshold is still uncrossed at the cap stops there, with that crossing
index left as NOT_CROSSED.
"""

import logging

import numpy as np

from delayedgame.const import MAX_OBSERVATIONS
from delayedgame.enums import SimulationMode
from delayedgame.game import PathOutcome
from delayedgame.models import GameParams

from .exceptions import MaxObservationsExceeded
from .models import NOT_CROSSED, PathBatch
from .random import child_generator

logger = logging.getLogger(__name__)

def _too_many(j: int, max_observations: int) -> MaxObservationsExceeded:
    return MaxObservationsExceeded(
        f"Game still running after {max_observations} observations (j={j})."
    )


def simulate_path(
    params: GameParams,
    rng: np.random.Generator,
    mode: SimulationMode = SimulationMode.INTERVAL,
    max_observations: int = MAX_OBSERVATIONS,
    record_increments: bool = False,
) -> PathOutcome:
    """Simulate one game observation by observation."""
    mode = SimulationMode(mode)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    m, n = params.threshold_a, params.threshold_b
    a = b = 0
    tau = 0.0
    nu1 = nu2 = rho = NOT_CROSSED
    at_rho: dict[str, float | int] = {}
    xs: list[int] = [0]
    ys: list[int] = [0]
    next_a = rng.exponential(1.0 / lam) if mode == SimulationMode.EVENT else 0.0
    next_b = rng.exponential(1.0 / mu) if mode == SimulationMode.EVENT else 0.0
    j = 0
    while nu1 == NOT_CROSSED or nu2 == NOT_CROSSED:
        if j == max_observations:
            if rho == NOT_CROSSED:
                raise _too_many(j + 1, max_observations)
            break
        j += 1
        a_prev, b_prev, tau_prev = a, b, tau
        delta = float(params.delta_law.sample(rng))
        tau += delta
        if mode == SimulationMode.INTERVAL:
            x, y = int(rng.poisson(lam * delta)), int(rng.poisson(mu * delta))
        else:
            x = y = 0
            while next_a <= tau:
                x += 1
                next_a += rng.exponential(1.0 / lam)
            while next_b <= tau:
                y += 1
                next_b += rng.exponential(1.0 / mu)
        a, b = a + x, b + y
        if record_increments:
            xs.append(x)
            ys.append(y)
        if nu1 == NOT_CROSSED and a >= m:
            nu1 = j
        if nu2 == NOT_CROSSED and b >= n:
            nu2 = j
        if rho == NOT_CROSSED and (a >= m or b >= n):
            rho = j
            at_rho = dict(
                tau_rho=tau, a_rho=a, b_rho=b, a_pre=a_prev, b_pre=b_prev, tau_pre=tau_prev
            )
    outcome = PathOutcome(
        nu1=None if nu1 == NOT_CROSSED else nu1,
        nu2=None if nu2 == NOT_CROSSED else nu2,
        rho=rho,
        x_increments=xs if record_increments else None,
        y_increments=ys if record_increments else None,
        **at_rho,
    )
    outcome.check_thresholds(params)
    return outcome


def _count_attacks(
    rng: np.random.Generator, next_attack: np.ndarray, until: np.ndarray, rate: float
) -> np.ndarray:
    """Count attack epochs up to `until`, advancing `next_attack` in place."""
    counts = np.zeros(len(until), dtype=np.int64)
    pending = np.flatnonzero(next_attack <= until)
    while pending.size:
        counts[pending] += 1
        next_attack[pending] += rng.exponential(1.0 / rate, size=pending.size)
        pending = pending[next_attack[pending] <= until[pending]]
    return counts


def simulate_paths(
    params: GameParams,
    rng: np.random.Generator,
    size: int,
    mode: SimulationMode = SimulationMode.INTERVAL,
    max_observations: int = MAX_OBSERVATIONS,
) -> PathBatch:
    """Simulate `size` independent games, vectorised over paths."""
    mode = SimulationMode(mode)
    lam, mu = params.attack_rate_a, params.attack_rate_b
    m, n = params.threshold_a, params.threshold_b

    a = np.zeros(size, dtype=np.int64)
    b = np.zeros(size, dtype=np.int64)
    tau = np.zeros(size)
    nu1 = np.full(size, NOT_CROSSED, dtype=np.int64)
    nu2 = np.full(size, NOT_CROSSED, dtype=np.int64)
    rho = np.full(size, NOT_CROSSED, dtype=np.int64)
    tau_rho, tau_pre = np.zeros(size), np.zeros(size)
    a_rho, b_rho = np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64)
    a_pre, b_pre = np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64)
    if mode == SimulationMode.EVENT:
        next_a = rng.exponential(1.0 / lam, size=size)
        next_b = rng.exponential(1.0 / mu, size=size)

    active = np.arange(size)
    j = 0
    while active.size:
        if j == max_observations:
            if np.any(rho[active] == NOT_CROSSED):
                raise _too_many(j + 1, max_observations)
            logger.debug("%d exited paths stopped at the observation cap", active.size)
            break
        j += 1
        prev_a, prev_b, prev_tau = a[active], b[active], tau[active]
        delta = params.delta_law.sample(rng, size=active.size)
        new_tau = prev_tau + delta
        if mode == SimulationMode.INTERVAL:
            x = rng.poisson(lam * delta)
            y = rng.poisson(mu * delta)
        else:
            pending_a, pending_b = next_a[active], next_b[active]
            x = _count_attacks(rng, pending_a, new_tau, lam)
            y = _count_attacks(rng, pending_b, new_tau, mu)
            next_a[active], next_b[active] = pending_a, pending_b
        a[active] = new_a = prev_a + x
        b[active] = new_b = prev_b + y
        tau[active] = new_tau

        nu1[active[(nu1[active] == NOT_CROSSED) & (new_a >= m)]] = j
        nu2[active[(nu2[active] == NOT_CROSSED) & (new_b >= n)]] = j
        exiting = (rho[active] == NOT_CROSSED) & ((new_a >= m) | (new_b >= n))
        idx = active[exiting]
        rho[idx] = j
        tau_rho[idx], a_rho[idx], b_rho[idx] = new_tau[exiting], new_a[exiting], new_b[exiting]
        tau_pre[idx], a_pre[idx], b_pre[idx] = prev_tau[exiting], prev_a[exiting], prev_b[exiting]

        active = active[(nu1[active] == NOT_CROSSED) | (nu2[active] == NOT_CROSSED)]
    logger.debug("Simulated %d paths in %d observations (%s mode)", size, j, mode.value)
    return PathBatch(
        nu1=nu1,
        nu2=nu2,
        rho=rho,
        tau_rho=tau_rho,
        a_rho=a_rho,
        b_rho=b_rho,
        a_pre=a_pre,
        b_pre=b_pre,
        tau_pre=tau_pre,
    )


def run_batch(
    params: GameParams,
    seed: int,
    batch: int,
    size: int,
    mode: SimulationMode,
    max_observations: int,
) -> PathBatch:
    """Simulate batch number `batch` on its own child stream."""
    return simulate_paths(params, child_generator(seed, batch), size, mode, max_observations)
