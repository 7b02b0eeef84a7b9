"""Immutable in-memory dataset snapshots with filtering, sorting, and paging."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Any

from .errors import StoreError
from .filters import FilterNode, selectivity_filter
from .filters.evaluate import entry_values
from .jsonl import JsonLinesArchive, StructureEntry

DEFAULT_PAGE_LIMIT = 20
MAX_PAGE_LIMIT = 100

_SLUG_RE = re.compile(r"[a-z0-9][a-z0-9-]*")

_MISSING = object()


@dataclass(frozen=True)
class DatasetSnapshot:
    """One mounted dataset: id-sorted entries plus the served info document."""

    database_id: str
    description: str
    info: dict[str, Any]
    entries: tuple[StructureEntry, ...]
    _by_id: dict[str, StructureEntry] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        self._by_id.update((entry.id, entry) for entry in self.entries)

    @property
    def total(self) -> int:
        return len(self.entries)

    def get(self, entry_id: str) -> StructureEntry | None:
        return self._by_id.get(entry_id)

    def sortable_properties(self) -> frozenset[str]:
        return frozenset(self.info.get("properties", {}))


@dataclass(frozen=True)
class Page:
    items: tuple[StructureEntry, ...] = field(default=())
    offset: int = 0
    limit: int = DEFAULT_PAGE_LIMIT
    total_matching: int = 0

    @property
    def more(self) -> bool:
        return self.offset + len(self.items) < self.total_matching


def load_snapshot(archive: JsonLinesArchive, database_id: str) -> DatasetSnapshot:
    if not _SLUG_RE.fullmatch(database_id):
        raise StoreError(f"invalid database id {database_id!r}")
    archive.validate()
    return DatasetSnapshot(
        database_id=database_id,
        description=archive.description,
        info=archive.info["structures"],
        entries=tuple(archive.entries),
    )


def _value_of(entry: StructureEntry, name: str) -> Any:
    if name == "id":
        return entry.id
    if name == "type":
        return entry.type
    return entry.attributes.get(name, _MISSING)


def _sorted_entries(
    entries: list[StructureEntry], sort_key: str, descending: bool
) -> list[StructureEntry]:
    direction = -1 if descending else 1
    decorated = [(_value_of(entry, sort_key), entry) for entry in entries]

    def compare(a: tuple[Any, StructureEntry], b: tuple[Any, StructureEntry]) -> int:
        va, vb = a[0], b[0]
        absent_a = va is _MISSING or va is None
        absent_b = vb is _MISSING or vb is None
        if absent_a != absent_b:
            return 1 if absent_a else -1  # absent values sort last either way
        if not absent_a:
            try:
                if va < vb:
                    return -direction
                if vb < va:
                    return direction
            except TypeError as exc:
                raise StoreError(
                    f"values of {sort_key!r} are not orderable: {exc}"
                ) from exc
        if a[1].id < b[1].id:
            return -1
        if a[1].id > b[1].id:
            return 1
        return 0

    return [entry for _, entry in sorted(decorated, key=cmp_to_key(compare))]


def query(
    snapshot: DatasetSnapshot,
    ast: FilterNode | None = None,
    offset: int = 0,
    limit: int = DEFAULT_PAGE_LIMIT,
    sort_key: str | None = None,
) -> Page:
    """Filter, sort, and slice the snapshot's entries into one page."""
    if offset < 0:
        raise StoreError("page_offset must be non-negative")
    if not 1 <= limit <= MAX_PAGE_LIMIT:
        raise StoreError(f"page_limit must be between 1 and {MAX_PAGE_LIMIT}")

    matched = selectivity_filter(ast, snapshot.entries)

    if sort_key is not None:
        descending = sort_key.startswith("-")
        name = sort_key[1:] if descending else sort_key
        if name not in snapshot.sortable_properties():
            raise StoreError(f"unknown sort property {name!r}")
        matched = _sorted_entries(matched, name, descending)

    return Page(
        items=tuple(matched[offset : offset + limit]),
        offset=offset,
        limit=limit,
        total_matching=len(matched),
    )
