"""Parameter validation and exit indices of the delayed game."""

from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np

from delayedgame.models import GameParams

from .exceptions import NoCrossing


def validate_params(raw: Mapping[str, Any] | GameParams) -> GameParams:
    """Validate a raw parameter bundle.

    Accepts the JSON layout {lambda, mu, delta_law: {type, ...}, M, N}. Rule
    violations raise NonPositiveRate, NonIntegerThreshold, ThresholdTooSmall or
    InvalidLawShape; structural problems raise a pydantic ValidationError.
    """
    if isinstance(raw, GameParams):
        return raw
    return GameParams.model_validate(raw)


def _first_crossing(path: Sequence[int], threshold: int, label: str) -> int:
    cumulative = np.cumsum(np.asarray(path, dtype=np.int64))
    crossed = np.flatnonzero(cumulative >= threshold)
    if crossed.size == 0:
        raise NoCrossing(
            f"{label} path of length {len(path)} never reaches threshold {threshold}."
        )
    return int(crossed[0])


def exit_indices(
    x_path: Sequence[int], y_path: Sequence[int], m: int, n: int
) -> tuple[int, int, int]:
    """Return (nu1, nu2, rho) for casualty increments indexed from 0.

    nu1 is the least j with x_0 + ... + x_j >= m, nu2 the analogue for y and n,
    rho = min(nu1, nu2).
    """
    nu1 = _first_crossing(x_path, m, "x")
    nu2 = _first_crossing(y_path, n, "y")
    return nu1, nu2, min(nu1, nu2)
