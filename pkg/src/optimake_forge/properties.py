"""Typed property tables read from CSV and JSON files."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from typing import Any

from .config import PropertyDefinition
from .errors import PropertyTableError
from .sources import RawEntrySource

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+(\.\d+)?|\.\d+)([eE][+-]?\d+)?$")

Scalar = int | float | bool | str


@dataclass
class PropertyTable:
    """Rows keyed by entry id or full source path; values already coerced.

    ``key_kind`` stays None until attachment resolves every key the same way.
    """

    source_path: str
    rows: dict[str, dict[str, Scalar]] = field(default_factory=dict)
    key_kind: str | None = None


def coerce_value(value: Scalar, kind: str, context: str) -> Scalar:
    """Coerce a raw CSV/JSON scalar to the declared property type.

    integer: sign and digits only; float: decimal, exponent, or integer
    literals; boolean: true/false case-insensitive; string: any scalar,
    rendered canonically.
    """
    if kind == "integer":
        if isinstance(value, bool):
            raise PropertyTableError(f"{context}: boolean is not an integer")
        if isinstance(value, int):
            return value
        if isinstance(value, str) and _INT_RE.match(value.strip()):
            return int(value.strip())
    elif kind == "float":
        if isinstance(value, bool):
            raise PropertyTableError(f"{context}: boolean is not a float")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str) and _FLOAT_RE.match(value.strip()):
            return float(value.strip())
    elif kind == "boolean":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.strip().lower() in ("true", "false"):
            return value.strip().lower() == "true"
    elif kind == "string":
        if isinstance(value, str):
            return value
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (int, float)):
            return json.dumps(value)
    else:
        raise PropertyTableError(f"{context}: unknown property type {kind!r}")
    raise PropertyTableError(f"{context}: cannot coerce {value!r} to {kind}")


def _decode(source: RawEntrySource) -> str:
    try:
        return source.content.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise PropertyTableError(f"{source.relative_path}: not UTF-8 text: {exc}") from exc


def _reject_nonfinite(token: str) -> None:
    raise PropertyTableError(f"non-finite number {token!r} not allowed")


def _parse_json_table(
    text: str, defs: dict[str, PropertyDefinition], path: str
) -> dict[str, dict[str, Scalar]]:
    try:
        obj = json.loads(text, parse_constant=_reject_nonfinite)
    except json.JSONDecodeError as exc:
        raise PropertyTableError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise PropertyTableError(f"{path}: top level must be an object keyed by entry")
    rows: dict[str, dict[str, Scalar]] = {}
    for key, record in obj.items():
        if not isinstance(record, dict):
            raise PropertyTableError(f"{path}: value for key {key!r} must be an object")
        row: dict[str, Scalar] = {}
        for name, value in record.items():
            if name not in defs:
                raise PropertyTableError(
                    f"{path}: undeclared property {name!r} for key {key!r}"
                )
            if value is None:
                continue
            row[name] = coerce_value(value, defs[name].type, f"{path}: key {key!r}, field {name!r}")
        rows[key] = row
    return rows


def _parse_csv_table(
    text: str, defs: dict[str, PropertyDefinition], path: str
) -> dict[str, dict[str, Scalar]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise PropertyTableError(f"{path}: missing header row") from None
    if len(header) < 1 or not header[0].strip():
        raise PropertyTableError(f"{path}: header must start with the key column")
    columns = header[1:]
    for name in columns:
        if name not in defs:
            raise PropertyTableError(f"{path}: undeclared column {name!r}")
    rows: dict[str, dict[str, Scalar]] = {}
    for line_no, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        key = record[0]
        if not key:
            raise PropertyTableError(f"{path}: row {line_no}: empty key")
        if key in rows:
            raise PropertyTableError(f"{path}: row {line_no}: duplicate key {key!r}")
        row: dict[str, Scalar] = {}
        for idx, name in enumerate(columns, start=1):
            cell = record[idx] if idx < len(record) else ""
            if cell == "":
                continue  # unknown value; property omitted for this entry
            row[name] = coerce_value(
                cell, defs[name].type, f"{path}: row {line_no}, column {name!r}"
            )
        rows[key] = row
    return rows


def parse_properties(
    source: RawEntrySource, defs: list[PropertyDefinition]
) -> PropertyTable:
    """Read one CSV or JSON property file against the declared definitions."""
    defs_by_name = {d.name: d for d in defs}
    text = _decode(source)
    lower = source.relative_path.lower()
    if lower.endswith(".json") or (
        not lower.endswith(".csv") and text.lstrip().startswith("{")
    ):
        rows = _parse_json_table(text, defs_by_name, source.relative_path)
    else:
        rows = _parse_csv_table(text, defs_by_name, source.relative_path)
    return PropertyTable(source_path=source.relative_path, rows=rows)
