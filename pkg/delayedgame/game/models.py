"""Models for single simulated games."""

from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from delayedgame.models import GameParams


class PathOutcome(BaseModel):
    """Outcome of one simulated game.

    Index 0 is the initial state (A_0, B_0, tau_0) = (0, 0, 0), so rho >= 1 and the
    pre-exit values at index rho - 1 are always defined. A crossing index is None
    when the simulation stopped before that threshold was crossed; rho never is.
    """

    model_config = ConfigDict(frozen=True)

    nu1: int | None = Field(ge=0, description="First index with A_j >= M.")
    nu2: int | None = Field(ge=0, description="First index with B_k >= N.")
    rho: int = Field(ge=0, description="Exit index min(nu1, nu2).")
    tau_rho: float = Field(ge=0, description="Observed ruin time.")
    a_rho: int = Field(ge=0)
    b_rho: int = Field(ge=0)
    a_pre: int = Field(ge=0)
    b_pre: int = Field(ge=0)
    tau_pre: float = Field(ge=0)
    x_increments: list[int] | None = None
    y_increments: list[int] | None = None

    @model_validator(mode="after")
    def _check_bookkeeping(self) -> Self:
        crossed = [nu for nu in (self.nu1, self.nu2) if nu is not None]
        if not crossed:
            raise ValueError("Neither crossing index is known.")
        if self.rho != min(crossed):
            raise ValueError(f"rho={self.rho} differs from min(nu1, nu2)={min(crossed)}")
        if self.tau_pre > self.tau_rho:
            raise ValueError("Pre-exit time exceeds the observed ruin time.")
        if self.a_pre > self.a_rho or self.b_pre > self.b_rho:
            raise ValueError("Cumulative casualties decreased.")
        return self

    @property
    def a_defeated(self) -> bool:
        """Whether A had crossed its threshold at the exit index."""
        return self.nu1 == self.rho

    @property
    def b_defeated(self) -> bool:
        """Whether B had crossed its threshold at the exit index."""
        return self.nu2 == self.rho

    def check_thresholds(self, params: GameParams) -> None:
        """Assert the exit conditions A_rho >= M or B_rho >= N, A_pre < M and B_pre < N."""
        m, n = params.threshold_a, params.threshold_b
        if not (self.a_rho >= m or self.b_rho >= n):
            raise AssertionError(
                f"Neither threshold crossed at rho: A={self.a_rho}, B={self.b_rho}"
            )
        if self.a_pre >= m or self.b_pre >= n:
            raise AssertionError(f"Threshold crossed before rho: A={self.a_pre}, B={self.b_pre}")
