"""The ``optimade.yaml`` dataset manifest: schema, loader, and validation."""

from __future__ import annotations

import fnmatch
import re
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .attributes import STANDARD_ATTRIBUTE_NAMES
from .errors import ConfigError, Diagnostic, SourceError
from .sources import iter_member_paths

MANIFEST_NAME = "optimade.yaml"
SUPPORTED_CONFIG_VERSIONS = ("1",)

_TOKEN_RE = re.compile(r"^[a-z_][a-z_0-9]*$")


class PropertyDefinition(BaseModel):
    """Typed description of one database-specific property."""

    model_config = ConfigDict(extra="forbid")

    name: str
    title: str
    description: str
    unit: str | None = None
    type: Literal["float", "integer", "string", "boolean"]

    @field_validator("name")
    @classmethod
    def _check_name(cls, v: str) -> str:
        if not _TOKEN_RE.match(v):
            raise ValueError(f"property name {v!r} is not a lowercase identifier token")
        if v in STANDARD_ATTRIBUTE_NAMES:
            raise ValueError(f"property name {v!r} collides with a standard attribute")
        return v


class SourceSpec(BaseModel):
    """An archive file or directory plus glob patterns selecting its members."""

    model_config = ConfigDict(extra="forbid")

    file: str
    matches: list[str] = Field(default_factory=lambda: ["*"])

    @field_validator("matches")
    @classmethod
    def _check_globs(cls, patterns: list[str]) -> list[str]:
        for pattern in patterns:
            if not pattern:
                raise ValueError("empty glob pattern")
            if "[" in pattern or "]" in pattern:
                raise ValueError(
                    f"glob {pattern!r}: only '*', '?', '**' and literal segments are allowed"
                )
        return patterns


class EntryConfig(BaseModel):
    """Per-entry-type processing rules."""

    model_config = ConfigDict(extra="forbid")

    entry_type: Literal["structures"]
    entry_paths: list[SourceSpec] = Field(min_length=1)
    property_paths: list[str] = Field(default_factory=list)
    property_definitions: list[PropertyDefinition] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_unique_definitions(self) -> "EntryConfig":
        seen: set[str] = set()
        for definition in self.property_definitions:
            if definition.name in seen:
                raise ValueError(f"duplicate property definition {definition.name!r}")
            seen.add(definition.name)
        return self


class DatasetConfig(BaseModel):
    """Typed model of the whole ``optimade.yaml`` manifest."""

    model_config = ConfigDict(extra="forbid")

    config_version: str
    database_description: str
    provider_prefix: str = "local"
    entries: list[EntryConfig] = Field(min_length=1)

    @field_validator("config_version", mode="before")
    @classmethod
    def _stringify_version(cls, v: object) -> object:
        # YAML authors commonly write `config_version: 1` unquoted.
        return str(v) if isinstance(v, int) else v

    @field_validator("config_version")
    @classmethod
    def _check_version(cls, v: str) -> str:
        if v not in SUPPORTED_CONFIG_VERSIONS:
            raise ValueError(
                f"unsupported config_version {v!r}; supported: {', '.join(SUPPORTED_CONFIG_VERSIONS)}"
            )
        return v

    @field_validator("provider_prefix")
    @classmethod
    def _check_prefix(cls, v: str) -> str:
        if not _TOKEN_RE.match(v):
            raise ValueError(f"provider_prefix {v!r} is not a lowercase identifier token")
        return v

    @model_validator(mode="after")
    def _check_unique_entry_types(self) -> "DatasetConfig":
        seen: set[str] = set()
        for entry in self.entries:
            if entry.entry_type in seen:
                raise ValueError(f"duplicate entry_type {entry.entry_type!r}")
            seen.add(entry.entry_type)
        return self

    def entry_config(self, entry_type: str) -> EntryConfig:
        for entry in self.entries:
            if entry.entry_type == entry_type:
                return entry
        raise KeyError(entry_type)


def _field_path(loc: tuple) -> str:
    parts = []
    for piece in loc:
        if isinstance(piece, int):
            parts.append(f"[{piece}]")
        else:
            parts.append(f".{piece}" if parts else str(piece))
    return "".join(parts) or "<root>"


def load_config(text: str) -> DatasetConfig:
    """Parse and validate a manifest document given as YAML text."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("manifest must be a YAML mapping")
    try:
        return DatasetConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(first["msg"], field_path=_field_path(tuple(first["loc"]))) from exc


def load_config_file(path: Path) -> DatasetConfig:
    if not path.is_file():
        raise ConfigError(f"manifest not found: {path}")
    return load_config(path.read_text(encoding="utf-8"))


def dump_config(cfg: DatasetConfig) -> str:
    """Serialize a manifest back to YAML; ``load_config`` on the result round-trips."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=True)


def validate_config(cfg: DatasetConfig, dataset_root: Path) -> list[Diagnostic]:
    """Check that every referenced file exists and every glob matches something."""
    diagnostics: list[Diagnostic] = []
    for entry in cfg.entries:
        for spec in entry.entry_paths:
            source_path = dataset_root / spec.file
            if not source_path.exists():
                diagnostics.append(
                    Diagnostic("error", spec.file, "entry source does not exist")
                )
                continue
            try:
                members = iter_member_paths(source_path)
            except SourceError as exc:
                diagnostics.append(Diagnostic("error", spec.file, str(exc)))
                continue
            for pattern in spec.matches:
                if not any(fnmatch.fnmatch(m, pattern) for m in members):
                    diagnostics.append(
                        Diagnostic(
                            "warning", spec.file, f"glob {pattern!r} matches no members"
                        )
                    )
        for prop_path in entry.property_paths:
            if not (dataset_root / prop_path).is_file():
                diagnostics.append(
                    Diagnostic("error", prop_path, "property file does not exist")
                )
    return diagnostics
