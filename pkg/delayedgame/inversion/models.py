"""Models for inverted distributions."""

import logging
from typing import Any
from typing_extensions import Self

import numpy as np
import pandera.polars as pa
import polars as pl
from pydantic import BaseModel, ConfigDict, Field, model_validator

from delayedgame.const import (
    MAX_TOTAL_MULTIPLICITY,
    POLE_SEPARATION,
    PDF_NEGATIVE_TOLERANCE,
    PMF_NEGATIVE_TOLERANCE,
)
from delayedgame.enums import DistributionKind, Provenance
from delayedgame.models import JsonModel

from .exceptions import PolesTooClose

logger = logging.getLogger(__name__)


class RationalLstTerm(BaseModel):
    """coeff / ((gamma_pole + theta) (pole1 + theta)**mult1 (pole2 + theta)**mult2)."""

    model_config = ConfigDict(frozen=True)

    coeff: complex = 1.0
    gamma_pole: float = Field(gt=0)
    pole1: float
    mult1: int = Field(default=0, ge=0)
    pole2: float
    mult2: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_multiplicity(self) -> Self:
        if self.mult1 + self.mult2 > MAX_TOTAL_MULTIPLICITY:
            raise ValueError(
                f"Total multiplicity {self.mult1 + self.mult2} exceeds {MAX_TOTAL_MULTIPLICITY}."
            )
        return self

    def poles(self) -> dict[float, int]:
        """Pole locations (as -theta) mapped to their multiplicities, zero multiplicities dropped."""
        found = {self.gamma_pole: 1}
        for pole, mult in ((self.pole1, self.mult1), (self.pole2, self.mult2)):
            if not mult:
                continue
            if any(abs(pole - other) <= POLE_SEPARATION for other in found):
                raise PolesTooClose(f"Pole {pole} coincides with one of {sorted(found)}.")
            found[pole] = mult
        return found

    def lst(self, theta: complex) -> complex:
        """Evaluate the term at theta."""
        return complex(
            self.coeff
            / (
                (self.gamma_pole + theta)
                * (self.pole1 + theta) ** self.mult1
                * (self.pole2 + theta) ** self.mult2
            )
        )


#######################
# Distribution tables #
#######################


class PmfSchema(pa.DataFrameModel):
    """Validates probability mass tables"""

    k: int = pa.Field(ge=0, unique=True)
    mass: float = pa.Field(ge=0)

    class Config:
        coerce = True


class EmpiricalPmfSchema(PmfSchema):
    """Validates empirical probability mass tables"""

    stderr: float = pa.Field(ge=0)


class PdfSchema(pa.DataFrameModel):
    """Validates sampled densities"""

    t: float = pa.Field(ge=0, unique=True)
    density: float = pa.Field(ge=0)

    class Config:
        coerce = True


class EmpiricalPdfSchema(PdfSchema):
    """Validates histogram densities"""

    stderr: float = pa.Field(ge=0)


class DistributionTable(JsonModel):
    """A pmf (k -> mass) or a sampled pdf (t -> density) with its provenance.

    Negative values within rounding of zero are clipped on construction; larger
    excursions are clipped too, with a warning.
    """

    kind: DistributionKind
    provenance: Provenance
    support: list[float]
    values: list[float]
    stderr: list[float] | None = None
    metadata: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_lengths(self) -> Self:
        if len(self.support) != len(self.values):
            raise ValueError("support and values must have the same length.")
        if self.stderr is not None and len(self.stderr) != len(self.values):
            raise ValueError("stderr and values must have the same length.")
        return self

    def model_post_init(self, __context: Any) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.size == 0:
            return
        tolerance = (
            PMF_NEGATIVE_TOLERANCE if self.kind == DistributionKind.PMF else PDF_NEGATIVE_TOLERANCE
        )
        lowest = float(values.min())
        if lowest < -tolerance:
            logger.warning("Clipping %s values down to %.3g at 0", self.kind.value, lowest)
        if lowest < 0:
            self.values = np.clip(values, 0.0, None).tolist()

    @property
    def value_column(self) -> str:
        """Name of the value column in tabular output."""
        return "mass" if self.kind == DistributionKind.PMF else "density"

    @property
    def support_column(self) -> str:
        """Name of the support column in tabular output."""
        return "k" if self.kind == DistributionKind.PMF else "t"

    @property
    def total_mass(self) -> float:
        """Sum of masses, or the trapezoid integral of the density over the grid."""
        values = np.asarray(self.values)
        if self.kind == DistributionKind.PMF:
            return float(values.sum())
        return float(np.trapezoid(values, np.asarray(self.support)))

    def mass(self, k: int) -> float:
        """Probability of the value k (0 outside the table)."""
        if self.kind != DistributionKind.PMF:
            raise TypeError("Point masses are only defined for pmf tables.")
        lookup = dict(zip((int(s) for s in self.support), self.values))
        return lookup.get(k, 0.0)

    def as_array(self, length: int | None = None) -> np.ndarray:
        """pmf values indexed by k = 0..length-1, zero where the table has no entry."""
        if self.kind != DistributionKind.PMF:
            raise TypeError("Only pmf tables index by integers.")
        support = np.asarray(self.support, dtype=np.int64)
        if length is None:
            length = int(support.max()) + 1 if support.size else 0
        out = np.zeros(length)
        keep = support < length
        out[support[keep]] = np.asarray(self.values)[keep]
        return out

    def to_polars(self) -> pl.DataFrame:
        """Columns k, mass (pmf) or t, density (pdf), plus stderr for empirical tables."""
        support = (
            pl.Series(self.support_column, self.support).cast(pl.Int64)
            if self.kind == DistributionKind.PMF
            else pl.Series(self.support_column, self.support, dtype=pl.Float64)
        )
        columns = [support, pl.Series(self.value_column, self.values, dtype=pl.Float64)]
        if self.stderr is not None:
            columns.append(pl.Series("stderr", self.stderr, dtype=pl.Float64))
        frame = pl.DataFrame(columns)
        return self._schema().validate(frame)

    def _schema(self) -> type[pa.DataFrameModel]:
        if self.kind == DistributionKind.PMF:
            return PmfSchema if self.stderr is None else EmpiricalPmfSchema
        return PdfSchema if self.stderr is None else EmpiricalPdfSchema


class DefeatProbabilities(BaseModel):
    """Probabilities that A, B, or both have crossed their thresholds at the observed ruin time."""

    model_config = ConfigDict(frozen=True)

    a_defeated: float = Field(description="P(A_rho >= M)")
    b_defeated: float = Field(description="P(B_rho >= N)")
    both: float = Field(description="P(A_rho >= M and B_rho >= N)")

    @property
    def a_only(self) -> float:
        """P(A_rho >= M and B_rho < N)."""
        return self.a_defeated - self.both

    @property
    def b_only(self) -> float:
        """P(B_rho >= N and A_rho < M)."""
        return self.b_defeated - self.both
