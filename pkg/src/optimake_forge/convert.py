"""Dataset conversion: identifiers, property attachment, and the full pipeline."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from .attributes import STANDARD_PROPERTY_INFO, derive_attributes
from .config import (
    MANIFEST_NAME,
    DatasetConfig,
    PropertyDefinition,
    load_config_file,
    validate_config,
)
from .errors import (
    ConfigError,
    ConvertError,
    Diagnostic,
    PropertyTableError,
    SourceError,
    StructureParseError,
)
from .jsonl import JsonLinesArchive, StructureEntry
from .parsers import parse_structure
from .properties import PropertyTable, parse_properties
from .sources import RawEntrySource, open_source


def _final_segment_stem(segment: str) -> str:
    # "101.cif" -> "101"; dotfiles like ".cif" keep their name.
    dot = segment.rfind(".")
    if dot > 0:
        return segment[:dot]
    return segment


def _strip_extension(path: str) -> str:
    segments = path.split("/")
    segments[-1] = _final_segment_stem(segments[-1])
    return "/".join(segments)


def assign_ids(paths: list[str]) -> dict[str, str]:
    """Derive entry ids from source paths.

    The longest common leading run of whole path segments is removed from all
    paths, then the longest common trailing character sequence of the final
    segments. A single path keeps its file stem; an id that would come out
    empty falls back to the full path with the extension stripped.
    """
    if not paths:
        raise ConvertError("no paths to assign ids to")
    if len(set(paths)) != len(paths):
        duplicates = sorted({p for p in paths if paths.count(p) > 1})
        raise ConvertError(f"duplicate source paths: {duplicates}")

    if len(paths) == 1:
        path = paths[0]
        entry_id = _final_segment_stem(path.split("/")[-1]) or _strip_extension(path)
        return {path: entry_id}

    split = {path: path.split("/") for path in paths}

    # Common leading whole segments; every path must keep its final segment.
    max_prefix = min(len(segments) for segments in split.values()) - 1
    prefix_len = 0
    while prefix_len < max_prefix:
        segment = split[paths[0]][prefix_len]
        if all(split[p][prefix_len] == segment for p in paths):
            prefix_len += 1
        else:
            break

    # Common trailing characters of the final segments.
    finals = [split[p][-1] for p in paths]
    suffix_len = 0
    shortest = min(len(f) for f in finals)
    while suffix_len < shortest:
        ch = finals[0][len(finals[0]) - 1 - suffix_len]
        if all(f[len(f) - 1 - suffix_len] == ch for f in finals):
            suffix_len += 1
        else:
            break

    ids: dict[str, str] = {}
    for path in paths:
        segments = split[path]
        final = segments[-1]
        stripped_final = final[: len(final) - suffix_len] if suffix_len else final
        parts = segments[prefix_len:-1]
        if stripped_final:
            parts = parts + [stripped_final]
        entry_id = "/".join(parts)
        if not entry_id:
            entry_id = _strip_extension(path)
        ids[path] = entry_id

    seen: dict[str, str] = {}
    for path, entry_id in ids.items():
        if entry_id in seen:
            raise ConvertError(
                f"id {entry_id!r} derived from both {seen[entry_id]!r} and {path!r}"
            )
        seen[entry_id] = path
    return ids


def build_info_document(
    defs: list[PropertyDefinition], prefix: str
) -> dict[str, Any]:
    """Info document for the structures entry type: standard plus custom properties."""
    properties: dict[str, Any] = {
        name: dict(meta) for name, meta in STANDARD_PROPERTY_INFO.items()
    }
    for definition in defs:
        entry: dict[str, Any] = {
            "type": definition.type,
            "title": definition.title,
            "description": definition.description,
        }
        if definition.unit is not None:
            entry["unit"] = definition.unit
        properties[f"_{prefix}_{definition.name}"] = entry
    return {
        "type": "info",
        "id": "structures",
        "provider_prefix": prefix,
        "properties": properties,
    }


def attach_properties(
    entries: list[StructureEntry],
    tables: list[PropertyTable],
    prefix: str,
    path_to_id: dict[str, str],
) -> list[StructureEntry]:
    """Resolve table keys (as ids first, then as full paths) and set prefixed attributes."""
    by_id = {entry.id: entry for entry in entries}
    attributes = {entry.id: dict(entry.attributes) for entry in entries}
    for table in tables:
        kinds: set[str] = set()
        for key, row in table.rows.items():
            as_id = key if key in by_id else None
            as_path = path_to_id.get(key)
            if as_id is not None and as_path is not None and as_path != as_id:
                raise ConvertError(
                    f"{table.source_path}: key {key!r} is ambiguous: "
                    f"matches entry {as_id!r} as id and {as_path!r} as path"
                )
            target = as_id or as_path
            if target is None:
                raise ConvertError(
                    f"{table.source_path}: key {key!r} matches no entry id or source path"
                )
            kinds.add("id" if as_id is not None else "path")
            for name, value in row.items():
                attr = f"_{prefix}_{name}"
                if attr in attributes[target]:
                    raise ConvertError(
                        f"{table.source_path}: property {name!r} already set on entry {target!r}"
                    )
                attributes[target][attr] = value
        table.key_kind = kinds.pop() if len(kinds) == 1 else None
    return [
        StructureEntry(id=entry.id, attributes=attributes[entry.id])
        for entry in entries
    ]


def _collect_sources(cfg: DatasetConfig, root: Path) -> list[RawEntrySource]:
    entry_cfg = cfg.entry_config("structures")
    sources: list[RawEntrySource] = []
    seen_paths: set[str] = set()
    for spec in entry_cfg.entry_paths:
        prefix = Path(spec.file).as_posix().strip("/")
        for source in open_source(root / spec.file, spec.matches, prefix=prefix):
            if source.relative_path in seen_paths:
                raise ConvertError(f"duplicate source path {source.relative_path!r}")
            seen_paths.add(source.relative_path)
            sources.append(source)
    return sources


def convert_dataset(root: Path, cfg: DatasetConfig | None = None) -> JsonLinesArchive:
    """Run the whole pipeline for one dataset directory."""
    if cfg is None:
        cfg = load_config_file(root / MANIFEST_NAME)
    entry_cfg = cfg.entry_config("structures")

    sources = _collect_sources(cfg, root)
    if not sources:
        raise ConvertError("no structure files matched the configured entry_paths")

    paths = [source.relative_path for source in sources]
    path_to_id = assign_ids(paths)

    entries = [
        StructureEntry(
            id=path_to_id[source.relative_path],
            attributes=derive_attributes(parse_structure(source)),
        )
        for source in sources
    ]
    entries.sort(key=lambda entry: entry.id)

    tables = []
    for prop_path in entry_cfg.property_paths:
        file_path = root / prop_path
        if not file_path.is_file():
            raise ConvertError(f"property file not found: {prop_path}")
        tables.append(
            parse_properties(
                RawEntrySource(Path(prop_path).as_posix(), file_path.read_bytes()),
                entry_cfg.property_definitions,
            )
        )
    entries = attach_properties(entries, tables, cfg.provider_prefix, path_to_id)

    info = build_info_document(entry_cfg.property_definitions, cfg.provider_prefix)
    return JsonLinesArchive(
        description=cfg.database_description,
        info={"structures": info},
        entries=tuple(entries),
    )


def dry_run_dataset(root: Path) -> list[Diagnostic]:
    """Validation pass for the CLI: manifest checks plus a parse of every matched file."""
    try:
        cfg = load_config_file(root / MANIFEST_NAME)
    except ConfigError as exc:
        return [Diagnostic("error", MANIFEST_NAME, str(exc))]

    diagnostics = validate_config(cfg, root)
    entry_cfg = cfg.entry_config("structures")
    sources: list[RawEntrySource] = []
    try:
        sources = _collect_sources(cfg, root)
    except (SourceError, ConvertError) as exc:
        diagnostics.append(Diagnostic("error", str(root), str(exc)))
    for source in sources:
        try:
            parse_structure(source)
        except StructureParseError as exc:
            diagnostics.append(Diagnostic("error", source.relative_path, str(exc)))
    for prop_path in entry_cfg.property_paths:
        file_path = root / prop_path
        if not file_path.is_file():
            continue  # already reported by validate_config
        try:
            parse_properties(
                RawEntrySource(Path(prop_path).as_posix(), file_path.read_bytes()),
                entry_cfg.property_definitions,
            )
        except PropertyTableError as exc:
            diagnostics.append(Diagnostic("error", prop_path, str(exc)))
    return diagnostics
