"""Writers for CSV tables, JSON documents and metadata side-files."""

import sys

import polars as pl

from delayedgame.const import SIGNIFICANT_DIGITS
from delayedgame.models import JsonModel

METADATA_SUFFIX = ".meta.json"


def format_floats(frame: pl.DataFrame, digits: int = SIGNIFICANT_DIGITS) -> pl.DataFrame:
    """Render float columns as decimal strings with `digits` significant digits."""
    return frame.with_columns(
        pl.col(name).map_elements(lambda x: f"{x:.{digits}g}", return_dtype=pl.String)
        for name, dtype in frame.schema.items()
        if dtype.is_float()
    )


def write_csv(frame: pl.DataFrame, out: str | None = None) -> None:
    """CSV with a header row, LF line endings and dot decimals; stdout when `out` is None."""
    text = format_floats(frame).write_csv(line_terminator="\n")
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="UTF-8", newline="\n") as file:
        file.write(text)


def write_json(model: JsonModel, out: str | None = None) -> None:
    """Indented JSON dump of a model; stdout when `out` is None."""
    if out is None:
        sys.stdout.write(model.to_json(indent=2) + "\n")
        return
    model.to_json(out, indent=2)


def metadata_path(out: str) -> str:
    """Side-file belonging to an output file."""
    return out + METADATA_SUFFIX
