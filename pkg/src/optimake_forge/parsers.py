"""Chained structure-parser registry.

Parsers run in a fixed most-specific-first order on each file; the first
success wins. The same bytes always yield the same structure or the same
error.
"""

from __future__ import annotations

from typing import Callable

from .cif import parse_cif
from .errors import AllParsersFailedError, StructureParseError
from .sources import RawEntrySource
from .structures import ParsedStructure
from .xyz import parse_extended_xyz, parse_plain_xyz

Parser = Callable[[bytes, str], ParsedStructure]

PARSER_CHAIN: tuple[tuple[str, Parser], ...] = (
    ("cif", parse_cif),
    ("extxyz", parse_extended_xyz),
    ("xyz", parse_plain_xyz),
)


def parse_structure(source: RawEntrySource) -> ParsedStructure:
    """Try every registered parser in order and return the first success."""
    reasons: list[tuple[str, str]] = []
    for name, parser in PARSER_CHAIN:
        try:
            return parser(source.content, source.relative_path)
        except StructureParseError as exc:
            reasons.append((name, str(exc)))
    raise AllParsersFailedError(source.relative_path, reasons)
