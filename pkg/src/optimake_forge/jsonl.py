"""The combined JSON Lines archive: header line, info lines, entry lines.

Output is byte-deterministic: sorted keys, compact separators, UTF-8, ``\\n``
line endings, shortest round-trip float rendering.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, BinaryIO

from .errors import JsonlError

JSONLINES_VERSION = "1.0"
API_VERSION = "1.2"


@dataclass(frozen=True)
class StructureEntry:
    id: str
    attributes: dict[str, Any]
    type: str = "structures"


@dataclass(frozen=True)
class JsonLinesArchive:
    description: str
    info: dict[str, dict[str, Any]]  # entry type -> info document
    entries: tuple[StructureEntry, ...]

    def validate(self) -> None:
        previous: str | None = None
        for entry in self.entries:
            if not entry.id:
                raise JsonlError("empty entry id")
            if previous is not None and entry.id <= previous:
                raise JsonlError(
                    f"entries not strictly ascending by id: {previous!r} then {entry.id!r}"
                )
            previous = entry.id


def _dumps(obj: Any) -> bytes:
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def write_jsonl(archive: JsonLinesArchive, out: BinaryIO) -> int:
    """Serialize the archive; returns the number of bytes written."""
    archive.validate()
    header = {
        "x-optimade": {
            "meta": {
                "jsonlines_version": JSONLINES_VERSION,
                "api_version": API_VERSION,
                "description": archive.description,
            }
        }
    }
    written = 0
    for obj in _iter_documents(header, archive):
        line = _dumps(obj) + b"\n"
        out.write(line)
        written += len(line)
    return written


def _iter_documents(header: dict, archive: JsonLinesArchive):
    yield header
    for entry_type in sorted(archive.info):
        yield archive.info[entry_type]
    for entry in archive.entries:
        yield {"id": entry.id, "type": entry.type, "attributes": entry.attributes}


def read_jsonl(infile: BinaryIO) -> JsonLinesArchive:
    """Inverse of write_jsonl; rejects layout violations with line numbers."""
    lines = infile.read().split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise JsonlError("empty file; missing header")

    def load(line: bytes, number: int) -> Any:
        try:
            return json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise JsonlError(f"malformed line: {exc}", line_number=number) from exc

    header = load(lines[0], 1)
    meta = header.get("x-optimade", {}).get("meta") if isinstance(header, dict) else None
    if not isinstance(meta, dict):
        raise JsonlError("missing header", line_number=1)
    description = meta.get("description", "")

    info: dict[str, dict[str, Any]] = {}
    entries: list[StructureEntry] = []
    seen_ids: set[str] = set()
    previous_id: str | None = None
    for number, raw in enumerate(lines[1:], start=2):
        obj = load(raw, number)
        if not isinstance(obj, dict) or "type" not in obj:
            raise JsonlError("document without a type", line_number=number)
        if obj["type"] == "info":
            if entries:
                raise JsonlError("info line after entry lines", line_number=number)
            info[obj.get("id", "")] = obj
        elif obj["type"] == "structures":
            entry_id = obj.get("id")
            if not isinstance(entry_id, str) or not entry_id:
                raise JsonlError("entry without an id", line_number=number)
            if entry_id in seen_ids:
                raise JsonlError(f"duplicate id {entry_id!r}", line_number=number)
            if previous_id is not None and entry_id < previous_id:
                raise JsonlError(
                    f"entries not sorted by id: {entry_id!r} after {previous_id!r}",
                    line_number=number,
                )
            seen_ids.add(entry_id)
            previous_id = entry_id
            entries.append(
                StructureEntry(id=entry_id, attributes=obj.get("attributes", {}))
            )
        else:
            raise JsonlError(f"unknown document type {obj['type']!r}", line_number=number)
    return JsonLinesArchive(description=description, info=info, entries=tuple(entries))


def write_archive_file(archive: JsonLinesArchive, path: Path) -> int:
    """Write atomically: a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as handle:
        written = write_jsonl(archive, handle)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, path)
    return written


def read_archive_file(path: Path) -> JsonLinesArchive:
    with open(path, "rb") as handle:
        return read_jsonl(handle)
