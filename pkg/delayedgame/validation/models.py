"""Models for acceptance checks."""

from typing import Any

import polars as pl
from pydantic import BaseModel, ConfigDict, field_validator


class CheckResult(BaseModel):
    """Outcome of one named acceptance check."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    value: float | None = None
    threshold: float | None = None
    detail: str = ""

    @field_validator("passed", mode="before")
    @classmethod
    def _plain_bool(cls, value: Any) -> bool:
        # numpy comparisons yield np.bool_
        return bool(value)


def results_frame(results: list[CheckResult]) -> pl.DataFrame:
    """Results as a table with one row per check, in run order."""
    return pl.DataFrame(
        [result.model_dump() for result in results],
        schema={
            "name": pl.String,
            "passed": pl.Boolean,
            "value": pl.Float64,
            "threshold": pl.Float64,
            "detail": pl.String,
        },
    )
