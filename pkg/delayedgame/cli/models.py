"""Models for command-line runs and their metadata side-files."""

from typing import Annotated, Literal

from pydantic import ConfigDict, Field

from delayedgame.enums import Side, SimulationMode
from delayedgame.models import GameParams, JsonModel, TransformQuery
from delayedgame.transforms import Moments


class _Options(JsonModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class EvalOptions(_Options):
    """Options of `eval`."""

    command: Literal["eval"] = "eval"
    u: complex = 1.0
    v: complex = 1.0
    theta: complex = 0.0
    path: Literal["closed", "operator", "both"] = "both"


class PmfOptions(_Options):
    """Options of `pmf`."""

    command: Literal["pmf"] = "pmf"
    side: Side = Side.A
    max_k: int | None = Field(default=None, ge=0)
    method: Literal["analytic", "empirical"] = "analytic"
    paths: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=0, ge=0)


class PdfOptions(_Options):
    """Options of `pdf`."""

    command: Literal["pdf"] = "pdf"
    method: Literal["exact", "numeric"] = "exact"
    t_max: float = Field(default=10.0, gt=0)
    t_step: float = Field(default=0.01, gt=0)


class SimulateOptions(_Options):
    """Options of `simulate`."""

    command: Literal["simulate"] = "simulate"
    paths: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=0, ge=0)
    mode: SimulationMode = SimulationMode.INTERVAL
    workers: int = Field(default=1, ge=1)
    queries: list[TransformQuery] = Field(default_factory=list)


class ValidateOptions(_Options):
    """Options of `validate`."""

    command: Literal["validate"] = "validate"
    paths: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)


CommandOptions = Annotated[
    EvalOptions | PmfOptions | PdfOptions | SimulateOptions | ValidateOptions,
    Field(discriminator="command"),
]


class RunConfig(JsonModel):
    """Everything a command needs: the game and the command options."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: GameParams
    options: CommandOptions
    out: str | None = None


class RunMetadata(JsonModel):
    """Content of the `<out>.meta.json` side-file."""

    model_config = ConfigDict(extra="forbid")

    version: str
    run: RunConfig
    method: str | None = None
    tolerances: dict[str, float] = Field(default_factory=dict)


class EvalRecord(JsonModel):
    """Result of `eval`."""

    query: TransformQuery
    phi_closed: complex | None = None
    phi_operator: complex | None = None
    difference: float | None = None
    gamma: complex | None = None
    moments: Moments | None = None
