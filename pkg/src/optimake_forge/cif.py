"""Minimal CIF 1.1 reader: cell, atom sites, and symmetry expansion.

Reads the first data block only. Tags are case-insensitive; values keep their
case. Handles quoted values, semicolon text fields, comments, and numeric
uncertainty suffixes like ``5.431(2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .elements import element_from_label
from .errors import StructureParseError
from .structures import ParsedStructure, Site, cell_to_vectors

DEDUP_FRACTIONAL_TOLERANCE = 1e-3

_CELL_TAGS = (
    "_cell_length_a",
    "_cell_length_b",
    "_cell_length_c",
    "_cell_angle_alpha",
    "_cell_angle_beta",
    "_cell_angle_gamma",
)
_SYMOP_TAGS = ("_symmetry_equiv_pos_as_xyz", "_space_group_symop_operation_xyz")

_UNCERTAINTY_RE = re.compile(r"\(\d+\)$")


class _Token:
    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value: str):
        self.kind = kind  # "tag" | "loop" | "data" | "value"
        self.value = value


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith(";"):
            # Semicolon text field: runs until a line that starts with ';'.
            field_lines = [line[1:]]
            i += 1
            while i < len(lines) and not lines[i].startswith(";"):
                field_lines.append(lines[i])
                i += 1
            if i >= len(lines):
                raise StructureParseError("unterminated text field")
            tokens.append(_Token("value", "\n".join(field_lines)))
            i += 1
            continue
        pos = 0
        n = len(line)
        while pos < n:
            ch = line[pos]
            if ch in " \t":
                pos += 1
                continue
            if ch == "#":
                break
            if ch in "'\"":
                # Quote closes only when followed by whitespace or end of line.
                end = pos + 1
                while end < n:
                    if line[end] == ch and (end + 1 >= n or line[end + 1] in " \t"):
                        break
                    end += 1
                if end >= n:
                    raise StructureParseError(f"unterminated quoted value: {line!r}")
                tokens.append(_Token("value", line[pos + 1 : end]))
                pos = end + 1
                continue
            end = pos
            while end < n and line[end] not in " \t":
                end += 1
            word = line[pos:end]
            lowered = word.lower()
            if lowered.startswith("_"):
                tokens.append(_Token("tag", lowered))
            elif lowered == "loop_":
                tokens.append(_Token("loop", lowered))
            elif lowered.startswith("data_"):
                tokens.append(_Token("data", word))
            else:
                tokens.append(_Token("value", word))
            pos = end
        i += 1
    return tokens


def _first_block(tokens: list[_Token]) -> list[_Token]:
    starts = [i for i, t in enumerate(tokens) if t.kind == "data"]
    if not starts:
        return tokens
    begin = starts[0] + 1
    end = starts[1] if len(starts) > 1 else len(tokens)
    return tokens[begin:end]


def _parse_block(tokens: list[_Token]) -> tuple[dict[str, str], list[dict[str, list[str]]]]:
    """Split a block into single tag/value pairs and loops (tag -> column)."""
    singles: dict[str, str] = {}
    loops: list[dict[str, list[str]]] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.kind == "tag":
            if i + 1 >= n or tokens[i + 1].kind != "value":
                raise StructureParseError(f"tag {tok.value} has no value")
            singles[tok.value] = tokens[i + 1].value
            i += 2
        elif tok.kind == "loop":
            i += 1
            header: list[str] = []
            while i < n and tokens[i].kind == "tag":
                header.append(tokens[i].value)
                i += 1
            if not header:
                raise StructureParseError("loop_ without tags")
            values: list[str] = []
            while i < n and tokens[i].kind == "value":
                values.append(tokens[i].value)
                i += 1
            if values and len(values) % len(header) != 0:
                raise StructureParseError(
                    f"loop starting with {header[0]} has a ragged row"
                )
            loops.append(
                {tag: values[k :: len(header)] for k, tag in enumerate(header)}
            )
        else:
            # Stray value outside any loop; tolerate and skip.
            i += 1
    return singles, loops


def _numeric(raw: str, context: str) -> float:
    text = _UNCERTAINTY_RE.sub("", raw.strip())
    try:
        return float(text)
    except ValueError:
        raise StructureParseError(f"unparseable numeric field {raw!r} for {context}") from None


_SYMOP_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-]?)\s*(?P<body>[xyz]|\d+(?:\.\d+)?(?:/\d+)?)", re.IGNORECASE
)


def parse_symop(text: str) -> tuple[tuple[tuple[int, int, int], ...], tuple[float, float, float]]:
    """Parse one operator like ``-x+1/2, y, z`` into (rotation rows, translation)."""
    parts = text.split(",")
    if len(parts) != 3:
        raise StructureParseError(f"symmetry operator {text!r} must have 3 components")
    rows: list[tuple[int, int, int]] = []
    shifts: list[float] = []
    axis_index = {"x": 0, "y": 1, "z": 2}
    for part in parts:
        coeffs = [0, 0, 0]
        shift = 0.0
        pos = 0
        stripped = part.strip()
        if not stripped:
            raise StructureParseError(f"empty component in operator {text!r}")
        while pos < len(stripped):
            match = _SYMOP_TERM_RE.match(stripped, pos)
            if not match:
                raise StructureParseError(f"cannot parse operator component {part!r}")
            sign = -1 if match.group("sign") == "-" else 1
            body = match.group("body").lower()
            if body in axis_index:
                coeffs[axis_index[body]] += sign
            elif "/" in body:
                num, den = body.split("/")
                shift += sign * float(Fraction(int(num), int(den)))
            else:
                shift += sign * float(body)
            pos = match.end()
        rows.append((coeffs[0], coeffs[1], coeffs[2]))
        shifts.append(shift)
    return tuple(rows), (shifts[0], shifts[1], shifts[2])


def _apply_symop(
    op: tuple[tuple[tuple[int, int, int], ...], tuple[float, float, float]],
    frac: tuple[float, float, float],
) -> tuple[float, float, float]:
    rows, shift = op
    out = []
    for row, t in zip(rows, shift):
        out.append((row[0] * frac[0] + row[1] * frac[1] + row[2] * frac[2] + t) % 1.0)
    return (out[0], out[1], out[2])


def _coincident(a: tuple[float, float, float], b: tuple[float, float, float]) -> bool:
    for x, y in zip(a, b):
        d = abs(x - y) % 1.0
        if min(d, 1.0 - d) > DEDUP_FRACTIONAL_TOLERANCE:
            return False
    return True


def parse_cif(content: bytes, source_path: str = "") -> ParsedStructure:
    try:
        text = content.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise StructureParseError(f"not UTF-8 text: {exc}") from exc
    if "_cell_length_a" not in text.lower():
        raise StructureParseError("missing cell parameters (no _cell_length_a tag)")

    singles, loops = _parse_block(_first_block(_tokenize(text)))

    cell_values = []
    for tag in _CELL_TAGS:
        if tag not in singles:
            raise StructureParseError(f"missing cell parameter {tag}")
        cell_values.append(_numeric(singles[tag], tag))
    lattice = cell_to_vectors(*cell_values)

    site_loop = next(
        (loop for loop in loops if "_atom_site_fract_x" in loop), None
    )
    if site_loop is None or not site_loop["_atom_site_fract_x"]:
        raise StructureParseError("missing atom-site loop")

    symops = [parse_symop(op) for op in _collect_symops(singles, loops)]
    if not symops:
        symops = [parse_symop("x,y,z")]

    row_count = len(site_loop["_atom_site_fract_x"])
    sites: list[Site] = []
    for row in range(row_count):
        element = _site_element(site_loop, row)
        frac = tuple(
            _numeric(site_loop[f"_atom_site_fract_{axis}"][row], f"fract_{axis}")
            for axis in "xyz"
        )
        occupancy = 1.0
        if "_atom_site_occupancy" in site_loop:
            raw = site_loop["_atom_site_occupancy"][row]
            if raw not in (".", "?"):
                occupancy = _numeric(raw, "_atom_site_occupancy")
        for op in symops:
            candidate = _apply_symop(op, frac)  # wrapped into [0, 1)
            if not any(
                s.element == element
                and s.occupancy == occupancy
                and _coincident(s.position, candidate)
                for s in sites
            ):
                sites.append(Site(element=element, position=candidate, occupancy=occupancy))

    return ParsedStructure(
        sites=tuple(sites),
        lattice=lattice,
        periodic=(True, True, True),
        positions_fractional=True,
        source_path=source_path,
    )


def _collect_symops(
    singles: dict[str, str], loops: list[dict[str, list[str]]]
) -> list[str]:
    for tag in _SYMOP_TAGS:
        for loop in loops:
            if tag in loop:
                return loop[tag]
        if tag in singles:
            return [singles[tag]]
    return []


def _site_element(site_loop: dict[str, list[str]], row: int) -> str:
    if "_atom_site_type_symbol" in site_loop:
        # Accept bare symbols and charge-decorated ones like 'O2-'.
        raw = site_loop["_atom_site_type_symbol"][row]
        element = element_from_label(raw)
        if element is None:
            raise StructureParseError(f"unknown element symbol {raw!r}")
        return element
    if "_atom_site_label" in site_loop:
        raw = site_loop["_atom_site_label"][row]
        element = element_from_label(raw)
        if element is None:
            raise StructureParseError(f"cannot infer element from label {raw!r}")
        return element
    raise StructureParseError("atom-site loop lacks type_symbol and label columns")
