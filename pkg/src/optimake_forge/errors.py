"""Exception hierarchy and the diagnostic record shared by validation tools."""

from __future__ import annotations

from dataclasses import dataclass


class OptimakeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(OptimakeError):
    """Manifest cannot be loaded: YAML syntax, schema, or version problem."""

    def __init__(self, message: str, field_path: str | None = None):
        self.field_path = field_path
        super().__init__(message if field_path is None else f"{field_path}: {message}")


class SourceError(OptimakeError):
    """Raw entry source cannot be opened or enumerated."""


class StructureParseError(OptimakeError):
    """A single structure file could not be parsed."""


class AllParsersFailedError(StructureParseError):
    """Every registered parser rejected the file."""

    def __init__(self, path: str, reasons: list[tuple[str, str]]):
        self.path = path
        self.reasons = reasons
        detail = "; ".join(f"{name}: {msg}" for name, msg in reasons)
        super().__init__(f"no parser accepted {path!r} ({detail})")


class PropertyTableError(OptimakeError):
    """Property file is malformed or inconsistent with the declared definitions."""


class ConvertError(OptimakeError):
    """Conversion pipeline failure: ids, attribute derivation, or attachment."""


class JsonlError(OptimakeError):
    """JSON Lines archive is malformed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        super().__init__(message if line_number is None else f"line {line_number}: {message}")


class FilterSyntaxError(OptimakeError):
    """Filter string rejected by the grammar."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"at offset {offset}: {message}{hint}")


class FilterTypeError(OptimakeError):
    """Filter predicate applied to a value of an incompatible type."""


class StoreError(OptimakeError):
    """Query against a dataset snapshot is invalid (for example an unknown sort key)."""


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding; ``severity`` is ``"error"`` or ``"warning"``."""

    severity: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.path}: {self.message}"
