"""Data models shared by all parts of delayedgame."""

import math
from abc import ABC, abstractmethod
from typing import Annotated, Any, Literal, overload

from typing_extensions import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

from .const import DOMAIN_TOLERANCE
from .enums import LawType
from .exceptions import (
    InvalidLawShape,
    NonIntegerThreshold,
    NonPositiveRate,
    QueryDomainError,
    ThresholdTooSmall,
)


class JsonModel(BaseModel):
    """Pydantic base model with JSON file helpers."""

    @overload
    def to_json(self, path: None = None, **kwargs) -> str:
        """Dump to a JSON string."""

    @overload
    def to_json(self, path: str, **kwargs) -> None:
        """Dump to a JSON file."""

    def to_json(self, path: str | None = None, **kwargs) -> str | None:
        """Dump to a JSON string or file."""
        kwargs.setdefault("by_alias", True)
        if path is None:
            return self.model_dump_json(**kwargs)
        encoding = kwargs.pop("encoding", "UTF-8")
        with open(path, "w", encoding=encoding, newline="\n") as file:
            file.write(self.model_dump_json(**kwargs))
        return None

    @overload
    @classmethod
    def from_json(cls, string: str, **kwargs) -> Self:
        """Load from a JSON string."""

    @overload
    @classmethod
    def from_json(cls, *, path: str, **kwargs) -> Self:
        """Load from a JSON file."""

    @classmethod
    def from_json(cls, string: str | None = None, path: str | None = None, **kwargs) -> Self:
        """Load from a JSON file or string."""
        if string:
            return cls.model_validate_json(string, **kwargs)
        if path:
            encoding = kwargs.pop("encoding", "UTF-8")
            with open(path, encoding=encoding) as file:
                return cls.model_validate_json(file.read(), **kwargs)
        raise ValueError("Either string or path must be provided.")


def _require_positive(name: str, value: float) -> float:
    """Raise NonPositiveRate unless the coerced value is strictly positive."""
    if not value > 0:
        raise NonPositiveRate(f"{name} must be > 0, got {value}.")
    return value


def _reject_fractional(value: Any, error: type[Exception], message: str) -> Any:
    """Reject bools and non-integral floats before int coercion would round or accept them."""
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise error(message.format(value))
    return int(value) if isinstance(value, float) else value


######################
# Observation laws   #
######################


class _LawBase(JsonModel, ABC):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @abstractmethod
    def lst(self, s: ArrayLike) -> NDArray[np.complex128] | complex:
        """Laplace-Stieltjes transform E[exp(-s * Delta)]."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int | None = None) -> NDArray[np.float64]:
        """Draw observation inter-arrival times."""


class ExponentialLaw(_LawBase):
    """Exponentially distributed inter-observation times with the given rate."""

    type: Literal["exponential"] = LawType.EXPONENTIAL.value
    rate: float = Field(allow_inf_nan=False, description="Observation rate gamma.")

    @field_validator("rate")
    @classmethod
    def _positive(cls, value: float) -> float:
        return _require_positive("rate", value)

    def lst(self, s: ArrayLike) -> NDArray[np.complex128] | complex:
        return self.rate / (self.rate + np.asarray(s, dtype=np.complex128))

    def sample(self, rng: np.random.Generator, size: int | None = None) -> NDArray[np.float64]:
        return rng.exponential(1.0 / self.rate, size=size)


class DeterministicLaw(_LawBase):
    """Observations at a fixed spacing d."""

    type: Literal["deterministic"] = LawType.DETERMINISTIC.value
    d: float = Field(allow_inf_nan=False, description="Spacing between observations.")

    @field_validator("d")
    @classmethod
    def _positive(cls, value: float) -> float:
        return _require_positive("d", value)

    def lst(self, s: ArrayLike) -> NDArray[np.complex128] | complex:
        return np.exp(-self.d * np.asarray(s, dtype=np.complex128))

    def sample(self, rng: np.random.Generator, size: int | None = None) -> NDArray[np.float64]:
        if size is None:
            return np.float64(self.d)
        return np.full(size, self.d)


class ErlangLaw(_LawBase):
    """Erlang(shape, rate) inter-observation times."""

    type: Literal["erlang"] = LawType.ERLANG.value
    shape: int
    rate: float = Field(allow_inf_nan=False)

    @field_validator("shape", mode="before")
    @classmethod
    def _integer_shape(cls, value: Any) -> Any:
        return _reject_fractional(
            value, InvalidLawShape, "Erlang shape must be an integer >= 1, got {}."
        )

    @field_validator("shape")
    @classmethod
    def _shape_at_least_one(cls, value: int) -> int:
        if value < 1:
            raise InvalidLawShape(f"Erlang shape must be an integer >= 1, got {value}.")
        return value

    @field_validator("rate")
    @classmethod
    def _positive(cls, value: float) -> float:
        return _require_positive("rate", value)

    def lst(self, s: ArrayLike) -> NDArray[np.complex128] | complex:
        return (self.rate / (self.rate + np.asarray(s, dtype=np.complex128))) ** self.shape

    def sample(self, rng: np.random.Generator, size: int | None = None) -> NDArray[np.float64]:
        return rng.gamma(self.shape, 1.0 / self.rate, size=size)


DeltaLaw = Annotated[ExponentialLaw | DeterministicLaw | ErlangLaw, Field(discriminator="type")]


######################
# Game parameters    #
######################


class GameParams(JsonModel):
    """Parameters of the delayed two-player game.

    Player A is attacked at rate `lambda`, player B at rate `mu`; every attack
    inflicts one casualty. The game is observed at the epochs of a renewal
    process with inter-arrival law `delta_law` and ends at the first
    observation where A has at least `M` or B has at least `N` casualties.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    attack_rate_a: float = Field(alias="lambda", allow_inf_nan=False)
    attack_rate_b: float = Field(alias="mu", allow_inf_nan=False)
    delta_law: DeltaLaw
    threshold_a: int = Field(alias="M")
    threshold_b: int = Field(alias="N")

    @field_validator("attack_rate_a", "attack_rate_b")
    @classmethod
    def _positive_rate(cls, value: float, info: ValidationInfo) -> float:
        return _require_positive(info.field_name, value)

    @field_validator("threshold_a", "threshold_b", mode="before")
    @classmethod
    def _integer_threshold(cls, value: Any, info: ValidationInfo) -> Any:
        return _reject_fractional(
            value, NonIntegerThreshold, f"{info.field_name} must be an integer, got {{}}."
        )

    @field_validator("threshold_a", "threshold_b")
    @classmethod
    def _threshold_at_least_one(cls, value: int, info: ValidationInfo) -> int:
        if value < 1:
            raise ThresholdTooSmall(f"{info.field_name} must be >= 1, got {value}.")
        return value

    @property
    def closed_form_capable(self) -> bool:
        """Whether the closed-form transforms apply (exponential observation law)."""
        return isinstance(self.delta_law, ExponentialLaw)

    @property
    def observation_rate(self) -> float:
        """Rate gamma of the exponential observation law."""
        if not isinstance(self.delta_law, ExponentialLaw):
            raise AttributeError("Only exponential observation laws have a single rate.")
        return self.delta_law.rate


######################
# Transform queries  #
######################


class TransformQuery(BaseModel):
    """Evaluation point (u, v, theta) of the joint transform."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    u: complex = 1.0 + 0.0j
    v: complex = 1.0 + 0.0j
    theta: complex = 0.0 + 0.0j

    @model_validator(mode="after")
    def _check_domain(self) -> Self:
        if not all(math.isfinite(abs(z)) for z in (self.u, self.v, self.theta)):
            raise QueryDomainError("Query values must be finite.")
        if abs(self.u) > 1.0 + DOMAIN_TOLERANCE:
            raise QueryDomainError(f"|u| must be <= 1, got {abs(self.u)}.")
        if abs(self.v) > 1.0 + DOMAIN_TOLERANCE:
            raise QueryDomainError(f"|v| must be <= 1, got {abs(self.v)}.")
        if self.theta.real < -DOMAIN_TOLERANCE:
            raise QueryDomainError(f"Re(theta) must be >= 0, got {self.theta.real}.")
        return self

    @property
    def is_origin_of_mass(self) -> bool:
        """True at u = v = 1, theta = 0 where every transform equals 1."""
        return self.u == 1 and self.v == 1 and self.theta == 0
