"""Shared fixtures."""

from pathlib import Path

import numpy as np
import pytest

from delayedgame import DeterministicLaw, ErlangLaw, ExponentialLaw, GameParams

DATA_DIR = Path(__file__).resolve().parents[1] / "data" / "reference"


def make_params(
    lam: float = 1.0, mu: float = 2.0, gamma: float = 5.0, m: int = 3, n: int = 4
) -> GameParams:
    """Exponential-observation parameters; defaults are the reference configuration."""
    return GameParams(
        attack_rate_a=lam,
        attack_rate_b=mu,
        delta_law=ExponentialLaw(rate=gamma),
        threshold_a=m,
        threshold_b=n,
    )


@pytest.fixture
def reference_params() -> GameParams:
    """lambda=1, mu=2, Exp(gamma=5), M=3, N=4."""
    return make_params()


@pytest.fixture
def deterministic_params() -> GameParams:
    return GameParams(
        attack_rate_a=1.0,
        attack_rate_b=2.0,
        delta_law=DeterministicLaw(d=0.2),
        threshold_a=3,
        threshold_b=4,
    )


@pytest.fixture
def erlang_params() -> GameParams:
    return GameParams(
        attack_rate_a=1.0,
        attack_rate_b=2.0,
        delta_law=ErlangLaw(shape=2, rate=10.0),
        threshold_a=3,
        threshold_b=4,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def reference_config() -> Path:
    return DATA_DIR / "config.json"


@pytest.fixture
def deterministic_config() -> Path:
    return DATA_DIR / "deterministic.json"
