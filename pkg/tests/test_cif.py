"""CIF reading: tokenization quirks, symmetry expansion, failure modes."""

from __future__ import annotations

import random

import pytest

from optimake_forge.cif import parse_cif, parse_symop
from optimake_forge.errors import StructureParseError

from .oracles import apply_ops_oracle

SIMPLE = b"""\
data_si
_cell_length_a 5.431
_cell_length_b 5.431
_cell_length_c 5.431
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
loop_
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
Si 0.0 0.0 0.0
"""


def test_simple_cell_and_site():
    structure = parse_cif(SIMPLE)
    assert structure.periodic == (True, True, True)
    assert structure.positions_fractional
    assert structure.lattice[0] == pytest.approx((5.431, 0.0, 0.0))
    assert [s.element for s in structure.sites] == ["Si"]
    assert structure.sites[0].occupancy == 1.0


def test_uncertainty_suffix_stripped():
    text = SIMPLE.replace(b"5.431\n", b"5.431(2)\n")
    structure = parse_cif(text)
    assert structure.lattice[0][0] == pytest.approx(5.431)


def test_occupancy_column():
    text = b"""\
data_x
_cell_length_a 4
_cell_length_b 4
_cell_length_c 4
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
loop_
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
_atom_site_occupancy
Cu 0 0 0 0.5
Au 0.5 0.5 0.5 .
"""
    structure = parse_cif(text)
    assert structure.sites[0].occupancy == 0.5
    assert structure.sites[1].occupancy == 1.0  # '.' means unstated


def test_label_fallback_infers_element():
    text = SIMPLE.replace(b"_atom_site_type_symbol", b"_atom_site_label").replace(
        b"Si 0.0", b"Si1 0.0"
    )
    structure = parse_cif(text)
    assert structure.sites[0].element == "Si"


def test_charge_decorated_symbol():
    text = SIMPLE.replace(b"Si 0.0", b"O2- 0.0")
    structure = parse_cif(text)
    assert structure.sites[0].element == "O"


def test_unknown_symbol_rejected():
    text = SIMPLE.replace(b"Si 0.0", b"Qq 0.0")
    with pytest.raises(StructureParseError, match="unknown element"):
        parse_cif(text)


def test_missing_cell_rejected():
    with pytest.raises(StructureParseError, match="cell"):
        parse_cif(b"data_x\nloop_\n_atom_site_fract_x\n0.0\n")


def test_missing_site_loop_rejected():
    header = SIMPLE.split(b"loop_")[0]
    with pytest.raises(StructureParseError, match="atom-site"):
        parse_cif(header)


def test_not_utf8_rejected():
    with pytest.raises(StructureParseError, match="UTF-8"):
        parse_cif(b"\xff\xfe_cell_length_a")


def test_first_data_block_wins():
    second = SIMPLE.replace(b"data_si", b"data_other").replace(b"5.431", b"9.9")
    structure = parse_cif(SIMPLE + second)
    assert structure.lattice[0][0] == pytest.approx(5.431)


def test_comments_and_quotes_ignored():
    text = b"""\
data_q  # trailing comment
_cell_length_a 3.0 # inline
_cell_length_b 3.0
_cell_length_c 3.0
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
_chemical_name 'rock salt phase'
loop_
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
Na 0 0 0
"""
    structure = parse_cif(text)
    assert structure.sites[0].element == "Na"


def _with_symops(tag_lines: bytes) -> bytes:
    return SIMPLE.replace(
        b"loop_\n_atom_site_type_symbol",
        tag_lines + b"loop_\n_atom_site_type_symbol",
    ).replace(b"Si 0.0 0.0 0.0", b"Si 0.25 0.25 0.25")


@pytest.mark.parametrize(
    "tag", ["_symmetry_equiv_pos_as_xyz", "_space_group_symop_operation_xyz"]
)
def test_inversion_doubles_general_position(tag):
    ops = f"loop_\n{tag}\n'x, y, z'\n'-x, -y, -z'\n".encode()
    structure = parse_cif(_with_symops(ops))
    positions = sorted(s.position for s in structure.sites)
    assert len(positions) == 2
    assert positions[0] == pytest.approx((0.25, 0.25, 0.25))
    assert positions[1] == pytest.approx((0.75, 0.75, 0.75))


def test_identity_only_is_a_no_op():
    ops = b"loop_\n_symmetry_equiv_pos_as_xyz\n'x, y, z'\n"
    plain = parse_cif(SIMPLE.replace(b"Si 0.0 0.0 0.0", b"Si 0.25 0.25 0.25"))
    expanded = parse_cif(_with_symops(ops))
    assert [s.position for s in expanded.sites] == [s.position for s in plain.sites]


def test_special_position_not_duplicated():
    # The origin is fixed by inversion, so expansion keeps a single site.
    ops = b"loop_\n_symmetry_equiv_pos_as_xyz\n'x, y, z'\n'-x, -y, -z'\n"
    structure = parse_cif(
        SIMPLE.replace(
            b"loop_\n_atom_site_type_symbol",
            ops + b"loop_\n_atom_site_type_symbol",
        )
    )
    assert len(structure.sites) == 1


def test_symop_parsing():
    rows, shift = parse_symop("-x+1/2, y, z-0.25")
    assert rows == ((-1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert shift == pytest.approx((0.5, 0.0, -0.25))


def test_symop_component_count():
    with pytest.raises(StructureParseError):
        parse_symop("x, y")


def test_symop_garbage_component():
    with pytest.raises(StructureParseError):
        parse_symop("x, y, q")


_FCC_TRANSLATIONS = [
    "x, y, z",
    "x, y+1/2, z+1/2",
    "x+1/2, y, z+1/2",
    "x+1/2, y+1/2, z",
]


def test_expansion_matches_oracle_on_random_inputs():
    rng = random.Random(2024)
    op_texts = _FCC_TRANSLATIONS + ["-x, -y, -z", "-y, x, z", "y, -x+1/2, z"]
    for _ in range(25):
        chosen = ["x, y, z"] + rng.sample(op_texts[1:], rng.randint(0, 4))
        base_sites = []
        for index in range(rng.randint(1, 3)):
            element = rng.choice(["Na", "Cl", "O"])
            position = tuple(round(rng.uniform(0, 1), 3) for _ in range(3))
            base_sites.append((element, position, 1.0))

        lines = ["data_r"]
        for tag, value in zip(
            ("a", "b", "c"), ("6.0", "6.0", "6.0")
        ):
            lines.append(f"_cell_length_{tag} {value}")
        for tag in ("alpha", "beta", "gamma"):
            lines.append(f"_cell_angle_{tag} 90")
        lines.append("loop_")
        lines.append("_symmetry_equiv_pos_as_xyz")
        lines.extend(f"'{op}'" for op in chosen)
        lines.append("loop_")
        lines.append("_atom_site_type_symbol")
        lines.append("_atom_site_fract_x")
        lines.append("_atom_site_fract_y")
        lines.append("_atom_site_fract_z")
        for element, position, _ in base_sites:
            lines.append(f"{element} {position[0]} {position[1]} {position[2]}")
        structure = parse_cif("\n".join(lines).encode())

        oracle_ops = []
        for op in chosen:
            rows, shift = parse_symop(op)
            oracle_ops.append(([list(r) for r in rows], list(shift)))
        expected = apply_ops_oracle(oracle_ops, base_sites)

        got = sorted((s.element, s.position) for s in structure.sites)
        want = sorted((element, position) for element, position, _ in expected)
        assert len(got) == len(want)
        for (ge, gp), (we, wp) in zip(got, want):
            assert ge == we
            assert gp == pytest.approx(wp, abs=2e-3)


def test_semicolon_text_field_is_single_value():
    text = b"""\
data_t
_cell_length_a 3
_cell_length_b 3
_cell_length_c 3
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
_publ_notes
;
multi line
note
;
loop_
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
Fe 0 0 0
"""
    structure = parse_cif(text)
    assert structure.sites[0].element == "Fe"
