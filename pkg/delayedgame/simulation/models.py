"""Models for simulation settings and results."""

from dataclasses import dataclass, field
from typing_extensions import Self

import numpy as np
from pydantic import ConfigDict, Field

from delayedgame.const import BATCH_SIZE, MAX_OBSERVATIONS
from delayedgame.enums import SimulationMode
from delayedgame.game import PathOutcome
from delayedgame.inversion import DistributionTable
from delayedgame.models import GameParams, JsonModel, TransformQuery

# Crossing index of a threshold the simulation stopped short of.
NOT_CROSSED = -1


class SimConfig(JsonModel):
    """Settings of a simulation run."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    n_paths: int = Field(ge=1, alias="paths")
    seed: int = Field(ge=0, lt=2**64)
    mode: SimulationMode = SimulationMode.INTERVAL
    max_observations: int = Field(default=MAX_OBSERVATIONS, ge=1)
    query_points: list[TransformQuery] = Field(default_factory=list)
    batch_size: int = Field(default=BATCH_SIZE, ge=1)
    workers: int = Field(
        default=1, ge=1, description="Worker processes; results do not depend on it."
    )


def _crossing_or_flag(value: int | float | None) -> int | float:
    return NOT_CROSSED if value is None else value


@dataclass(frozen=True)
class PathBatch:
    """Outcomes of many simulated games, one array entry per path.

    nu1 and nu2 hold NOT_CROSSED where the simulation stopped before that
    threshold was crossed.
    """

    nu1: np.ndarray = field(repr=False)
    nu2: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    tau_rho: np.ndarray = field(repr=False)
    a_rho: np.ndarray = field(repr=False)
    b_rho: np.ndarray = field(repr=False)
    a_pre: np.ndarray = field(repr=False)
    b_pre: np.ndarray = field(repr=False)
    tau_pre: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.rho)

    @classmethod
    def concatenate(cls, batches: list[Self]) -> Self:
        """Join batches in the given order."""
        return cls(
            **{
                name: np.concatenate([getattr(batch, name) for batch in batches])
                for name in cls.__dataclass_fields__
            }
        )

    @classmethod
    def from_outcomes(cls, outcomes: list[PathOutcome]) -> Self:
        """Stack single outcomes."""
        return cls(
            **{
                name: np.array(
                    [_crossing_or_flag(getattr(outcome, name)) for outcome in outcomes]
                )
                for name in cls.__dataclass_fields__
            }
        )

    def outcome(self, i: int) -> PathOutcome:
        """Outcome of path i."""
        values = {name: getattr(self, name)[i].item() for name in self.__dataclass_fields__}
        for name in ("nu1", "nu2"):
            if values[name] == NOT_CROSSED:
                values[name] = None
        return PathOutcome(**values)

    def check_invariants(self, params: GameParams) -> None:
        """Assert the exit bookkeeping on every path."""
        m, n = params.threshold_a, params.threshold_b
        never = np.iinfo(np.int64).max
        nu1 = np.where(self.nu1 == NOT_CROSSED, never, self.nu1)
        nu2 = np.where(self.nu2 == NOT_CROSSED, never, self.nu2)
        if not np.array_equal(self.rho, np.minimum(nu1, nu2)):
            raise AssertionError("rho differs from min(nu1, nu2).")
        if not np.all(self.rho >= 1):
            raise AssertionError("A game ended at the initial state.")
        if not np.all((self.a_rho >= m) | (self.b_rho >= n)):
            raise AssertionError("Neither threshold crossed at rho.")
        if np.any(self.a_pre >= m) or np.any(self.b_pre >= n):
            raise AssertionError("A threshold was crossed before rho.")
        if np.any(self.tau_pre > self.tau_rho) or np.any(self.tau_pre < 0):
            raise AssertionError("Observation times are not ordered.")


class FunctionalEstimate(JsonModel):
    """Monte Carlo estimate of E[u^A_rho v^B_rho exp(-theta tau_rho)]."""

    query: TransformQuery
    mean: complex
    stderr: float = Field(ge=0)


class WinCounts(JsonModel):
    """Numbers of games ended by the defeat of A only, B only, or both at once."""

    a_only: int = Field(ge=0, description="A crossed M, B had not crossed N.")
    b_only: int = Field(ge=0, description="B crossed N, A had not crossed M.")
    both: int = Field(ge=0, description="Both thresholds crossed at the same observation.")

    @property
    def total(self) -> int:
        """Number of games."""
        return self.a_only + self.b_only + self.both


class SimSummary(JsonModel):
    """Summary of a simulation run."""

    params: GameParams
    config: SimConfig
    functional_estimates: list[FunctionalEstimate]
    pmf_a: DistributionTable
    pmf_b: DistributionTable
    tau_histogram: DistributionTable
    win_counts: WinCounts
    mean_tau: float
    mean_a: float
    mean_b: float
