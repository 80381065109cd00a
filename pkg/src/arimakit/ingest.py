"""Reading one entity's annual series out of a long-format CSV."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import GapError, IoError, ParseError, SchemaError
from .series import TimeSeries


@dataclass(frozen=True)
class IngestSpec:
    """Columns are header names or zero-based indices. ``value_column=None``
    picks the last column, which is where cause-of-death exports keep the count."""

    path: str | Path
    value_column: str | int | None = None
    year_column: str | int = "Year"
    entity_column: str | int = "Entity"
    entity_filter: str | None = None
    year_range: tuple | None = None

    def __post_init__(self):
        if self.year_range is not None:
            start, end = self.year_range
            if int(start) > int(end):
                raise SchemaError(f"year range start {start} is after end {end}")
            object.__setattr__(self, "year_range", (int(start), int(end)))


def parse_year_range(text: str) -> tuple:
    """'1990:2019' -> (1990, 2019); either side may be empty."""
    try:
        lo, hi = text.split(":")
        return (int(lo) if lo else -(10**9), int(hi) if hi else 10**9)
    except ValueError as exc:
        raise SchemaError(f"year range must look like START:END, got {text!r}") from exc


def _column_index(header: list, col, role: str) -> int:
    if isinstance(col, int) or (isinstance(col, str) and col.isdigit()):
        idx = int(col)
        if not 0 <= idx < len(header):
            raise SchemaError(f"{role} column index {idx} outside header of {len(header)} columns")
        return idx
    if col not in header:
        raise SchemaError(f"{role} column {col!r} not found; header is {header}")
    return header.index(col)


def ingest_csv(spec: IngestSpec) -> TimeSeries:
    path = Path(spec.path)
    try:
        with path.open(newline="", encoding="utf-8-sig") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise SchemaError(f"{path} is empty; a header row is required")
    header = [h.strip() for h in rows[0]]
    value_col = spec.value_column if spec.value_column is not None else len(header) - 1
    vi = _column_index(header, value_col, "value")
    yi = _column_index(header, spec.year_column, "year")
    ei = None
    if spec.entity_filter is not None:
        ei = _column_index(header, spec.entity_column, "entity")

    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}", lineno)
        if ei is not None and row[ei].strip() != spec.entity_filter:
            continue
        try:
            year_f = float(row[yi])
            if not year_f.is_integer():
                raise ValueError(row[yi])
            year = int(year_f)
        except (ValueError, OverflowError):
            raise ParseError(f"line {lineno}: year {row[yi]!r} is not an integer", lineno) from None
        if spec.year_range and not spec.year_range[0] <= year <= spec.year_range[1]:
            continue
        try:
            value = float(row[vi])
        except ValueError:
            raise ParseError(f"line {lineno}: value {row[vi]!r} is not a number", lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"line {lineno}: value {row[vi]!r} is not finite", lineno)
        records.append((year, value))

    if not records:
        what = f"entity {spec.entity_filter!r}" if spec.entity_filter else "the file"
        raise SchemaError(f"no rows selected from {what}")
    records.sort(key=lambda r: r[0])
    years = [r[0] for r in records]
    dupes = sorted({y for y, nxt in zip(years, years[1:]) if y == nxt})
    if dupes:
        raise GapError(f"duplicate years: {', '.join(map(str, dupes))}", dupes)
    missing = sorted(set(range(years[0], years[-1] + 1)) - set(years))
    if missing:
        raise GapError(f"missing years: {', '.join(map(str, missing))}", missing)
    label = spec.entity_filter or header[vi]
    return TimeSeries([r[1] for r in records], years[0], label)
