"""Plain and extended XYZ readers (single frame, cartesian ångström)."""

from __future__ import annotations

import re

from .errors import StructureParseError
from .structures import Matrix3, ParsedStructure, Site

_LATTICE_RE = re.compile(r'Lattice="([^"]*)"')


def _decode_lines(content: bytes) -> list[str]:
    try:
        return content.decode("utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise StructureParseError(f"not UTF-8 text: {exc}") from exc


def _parse_frame(content: bytes, source_path: str) -> tuple[list[Site], str]:
    lines = _decode_lines(content)
    if not lines:
        raise StructureParseError("empty file")
    try:
        natoms = int(lines[0].strip())
    except ValueError:
        raise StructureParseError(f"first line is not an atom count: {lines[0]!r}") from None
    if natoms <= 0:
        raise StructureParseError(f"atom count must be positive, got {natoms}")
    comment = lines[1] if len(lines) > 1 else ""
    body = lines[2:]
    atom_lines = [line for line in body if line.strip()]
    if len(atom_lines) != natoms:
        raise StructureParseError(
            f"declared {natoms} atoms but found {len(atom_lines)} coordinate lines"
        )
    # A second frame would show up as extra non-blank lines; trajectories are
    # out of scope, so the count check above already rejects them.
    sites = []
    for line in atom_lines:
        fields = line.split()
        if len(fields) < 4:
            raise StructureParseError(f"short coordinate line: {line!r}")
        symbol = fields[0]
        try:
            x, y, z = (float(f) for f in fields[1:4])
        except ValueError:
            raise StructureParseError(f"non-numeric coordinates: {line!r}") from None
        sites.append(Site(element=symbol, position=(x, y, z)))
    return sites, comment


def _lattice_from_comment(comment: str) -> Matrix3 | None:
    match = _LATTICE_RE.search(comment)
    if match is None:
        return None
    fields = match.group(1).split()
    if len(fields) != 9:
        raise StructureParseError(
            f"Lattice must have 9 components, got {len(fields)}"
        )
    try:
        v = [float(f) for f in fields]
    except ValueError:
        raise StructureParseError(f"non-numeric lattice component in {match.group(1)!r}") from None
    return ((v[0], v[1], v[2]), (v[3], v[4], v[5]), (v[6], v[7], v[8]))


def parse_extended_xyz(content: bytes, source_path: str = "") -> ParsedStructure:
    """XYZ whose comment line carries ``Lattice="..."``; periodic in all directions."""
    sites, comment = _parse_frame(content, source_path)
    lattice = _lattice_from_comment(comment)
    if lattice is None:
        raise StructureParseError("comment line has no Lattice key")
    return ParsedStructure(
        sites=tuple(sites),
        lattice=lattice,
        periodic=(True, True, True),
        positions_fractional=False,
        source_path=source_path,
    )


def parse_plain_xyz(content: bytes, source_path: str = "") -> ParsedStructure:
    """Non-periodic XYZ; refuses files that declare a lattice."""
    sites, comment = _parse_frame(content, source_path)
    if _LATTICE_RE.search(comment):
        raise StructureParseError("comment declares a lattice; not plain XYZ")
    return ParsedStructure(sites=tuple(sites), source_path=source_path)


def parse_xyz(content: bytes, source_path: str = "") -> ParsedStructure:
    """Dispatch on the comment line: extended when it has a lattice, else plain."""
    sites, comment = _parse_frame(content, source_path)
    lattice = _lattice_from_comment(comment)
    if lattice is None:
        return ParsedStructure(sites=tuple(sites), source_path=source_path)
    return ParsedStructure(
        sites=tuple(sites),
        lattice=lattice,
        periodic=(True, True, True),
        positions_fractional=False,
        source_path=source_path,
    )
