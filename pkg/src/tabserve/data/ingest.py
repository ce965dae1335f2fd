"""CSV ingestion with row-level quarantine instead of silent drops."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ..errors import InvalidInputError
from .schema import DatasetSchema


@dataclass(frozen=True)
class QuarantinedRow:
    row_number: int   # 1-based over data rows, header excluded
    reason: str


@dataclass
class RawTable:
    schema: DatasetSchema
    columns: dict[str, list] = field(default_factory=dict)
    n_rows: int = 0
    source_rows: int = 0
    quarantined: list[QuarantinedRow] = field(default_factory=list)

    def row(self, i: int) -> dict:
        return {label: values[i] for label, values in self.columns.items()}


def _parse_timestamp(text: str) -> float:
    # Accepts YYYY-MM or YYYY-MM-DD; value is a monotone month index.
    parts = text.strip().split("-")
    if len(parts) not in (2, 3):
        raise ValueError(f"bad timestamp {text!r}")
    year, month = int(parts[0]), int(parts[1])
    if not 1 <= month <= 12:
        raise ValueError(f"bad month in {text!r}")
    return float(year * 12 + (month - 1))


def _parse_cell(text: str, kind: str):
    text = text.strip()
    if text == "":
        return None
    if kind == "numeric":
        return float(text)
    if kind == "timestamp":
        return _parse_timestamp(text)
    return text  # categorical / ordinal keep their string levels


def ingest_csv(source, schema: DatasetSchema) -> RawTable:
    """Parse a CSV byte stream into a typed table.

    Rows with unparseable cells or a missing target land in the quarantine
    list with their row number; everything else is ingested. Raises on an
    empty stream, on missing schema columns, and when the surviving target
    column has fewer than two distinct values.
    """
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif hasattr(source, "read"):
        data = source.read()
        if isinstance(data, str):
            data = data.encode()
    elif isinstance(source, str):
        data = source.encode()
    else:
        raise InvalidInputError(f"unsupported CSV source type {type(source)!r}")
    if not data.strip():
        raise InvalidInputError("empty input: no CSV header found")

    reader = csv.reader(io.StringIO(data.decode("utf-8-sig")))
    try:
        header = next(reader)
    except StopIteration:
        raise InvalidInputError("empty input: no CSV header found")
    header = [h.strip() for h in header]
    wanted = {c.label: c.kind for c in schema.columns}
    missing = sorted(set(wanted) - set(header))
    if missing:
        raise InvalidInputError(f"missing columns for schema {schema.name!r}: {missing}")
    positions = {label: header.index(label) for label in wanted}

    table = RawTable(schema=schema, columns={label: [] for label in wanted})
    for row_number, row in enumerate(reader, start=1):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        table.source_rows += 1
        if len(row) < len(header):
            table.quarantined.append(QuarantinedRow(row_number, "short row"))
            continue
        parsed = {}
        problem = None
        for label, kind in wanted.items():
            try:
                parsed[label] = _parse_cell(row[positions[label]], kind)
            except ValueError as exc:
                problem = f"column {label!r}: {exc}"
                break
        if problem is None and parsed[schema.target] is None:
            problem = "missing target value"
        if problem is not None:
            table.quarantined.append(QuarantinedRow(row_number, problem))
            continue
        for label in wanted:
            table.columns[label].append(parsed[label])
        table.n_rows += 1

    distinct_targets = {v for v in table.columns[schema.target]}
    if len(distinct_targets) < 2:
        raise InvalidInputError(
            f"target {schema.target!r} has {len(distinct_targets)} distinct value(s); need >= 2")
    return table
