"""Plain and extended XYZ readers, plus the chained parser dispatch."""

from __future__ import annotations

import pytest

from optimake_forge.errors import AllParsersFailedError, StructureParseError
from optimake_forge.parsers import parse_structure
from optimake_forge.sources import RawEntrySource
from optimake_forge.xyz import parse_extended_xyz, parse_plain_xyz, parse_xyz

WATER = b"""\
3
water molecule
O 0.000 0.000 0.117
H 0.000 0.757 -0.471
H 0.000 -0.757 -0.471
"""

PERIODIC = b"""\
2
Lattice="5.64 0 0 0 5.64 0 0 0 5.64" Properties=species:S:1:pos:R:3
Na 0.0 0.0 0.0
Cl 2.82 2.82 2.82
"""


def test_plain_molecule():
    structure = parse_plain_xyz(WATER)
    assert [s.element for s in structure.sites] == ["O", "H", "H"]
    assert structure.lattice is None
    assert structure.periodic == (False, False, False)
    assert structure.sites[1].position == (0.0, 0.757, -0.471)


def test_extended_lattice():
    structure = parse_extended_xyz(PERIODIC)
    assert structure.lattice == ((5.64, 0.0, 0.0), (0.0, 5.64, 0.0), (0.0, 0.0, 5.64))
    assert structure.periodic == (True, True, True)
    assert not structure.positions_fractional


def test_dispatch_by_comment_line():
    assert parse_xyz(WATER).lattice is None
    assert parse_xyz(PERIODIC).lattice is not None


def test_plain_refuses_lattice():
    with pytest.raises(StructureParseError, match="lattice"):
        parse_plain_xyz(PERIODIC)


def test_extended_requires_lattice():
    with pytest.raises(StructureParseError, match="Lattice"):
        parse_extended_xyz(WATER)


def test_count_mismatch():
    with pytest.raises(StructureParseError, match="declared 3 atoms but found 2"):
        parse_plain_xyz(b"3\n\nO 0 0 0\nH 0 0 1\n")


def test_bad_count_line():
    with pytest.raises(StructureParseError, match="atom count"):
        parse_plain_xyz(b"three\n\nO 0 0 0\n")


def test_nonpositive_count():
    with pytest.raises(StructureParseError, match="positive"):
        parse_plain_xyz(b"0\n\n")


def test_unknown_element():
    with pytest.raises(StructureParseError, match="unknown element"):
        parse_plain_xyz(b"1\n\nQq 0 0 0\n")


def test_short_coordinate_line():
    with pytest.raises(StructureParseError, match="short coordinate line"):
        parse_plain_xyz(b"1\n\nO 0 0\n")


def test_lattice_needs_nine_numbers():
    bad = PERIODIC.replace(b'"5.64 0 0 0 5.64 0 0 0 5.64"', b'"1 0 0 0 1 0"')
    with pytest.raises(StructureParseError, match="9 components"):
        parse_extended_xyz(bad)


def test_chain_tries_each_parser():
    source = RawEntrySource(relative_path="data/w.xyz", content=WATER)
    structure = parse_structure(source)
    assert structure.source_path == "data/w.xyz"
    assert len(structure.sites) == 3


def test_chain_failure_lists_every_reason():
    source = RawEntrySource(relative_path="bad.dat", content=b"not a structure")
    with pytest.raises(AllParsersFailedError) as excinfo:
        parse_structure(source)
    reasons = dict(excinfo.value.reasons)
    assert set(reasons) == {"cif", "extxyz", "xyz"}
    message = str(excinfo.value)
    assert "bad.dat" in message
