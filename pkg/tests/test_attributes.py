"""Derived attribute values checked against independent formula oracles."""

from __future__ import annotations

import random

import pytest

from optimake_forge.attributes import (
    STANDARD_PROPERTY_INFO,
    anonymous_formula,
    derive_attributes,
    element_amounts,
    reduced_formula,
)
from optimake_forge.errors import ConvertError
from optimake_forge.structures import ParsedStructure, Site

from .oracles import anonymous_formula_oracle, ratios_oracle, reduced_formula_oracle


def _structure_from_counts(counts: dict[str, int], **kwargs) -> ParsedStructure:
    sites = []
    for element in counts:
        for _ in range(counts[element]):
            sites.append(Site(element, (0.1 * len(sites), 0.0, 0.0)))
    return ParsedStructure(sites=tuple(sites), **kwargs)


def test_silica():
    attrs = derive_attributes(_structure_from_counts({"Si": 1, "O": 2}))
    assert attrs["chemical_formula_reduced"] == "O2Si"
    assert attrs["chemical_formula_anonymous"] == "A2B"
    assert attrs["chemical_formula_descriptive"] == attrs["chemical_formula_reduced"]
    assert attrs["elements"] == ["O", "Si"]
    assert attrs["nelements"] == 2
    assert attrs["elements_ratios"] == pytest.approx([2 / 3, 1 / 3])


def test_common_divisor_removed():
    attrs = derive_attributes(_structure_from_counts({"Fe": 4, "O": 6}))
    assert attrs["chemical_formula_reduced"] == "Fe2O3"
    assert attrs["chemical_formula_anonymous"] == "A3B2"


def test_molecule_periodicity_fields():
    attrs = derive_attributes(_structure_from_counts({"O": 1, "H": 2}))
    assert attrs["dimension_types"] == [0, 0, 0]
    assert attrs["nperiodic_dimensions"] == 0
    assert attrs["lattice_vectors"] is None
    assert attrs["nsites"] == 3
    assert attrs["structure_features"] == []
    assert attrs["last_modified"] is None


def test_partial_occupancy_species():
    structure = ParsedStructure(
        sites=(
            Site("Cu", (0, 0, 0), occupancy=0.5),
            Site("Au", (0.5, 0.5, 0.5)),
            Site("Cu", (1, 1, 1), occupancy=0.5),
        )
    )
    attrs = derive_attributes(structure)
    assert attrs["structure_features"] == ["disorder"]
    names = [sp["name"] for sp in attrs["species"]]
    assert names == sorted(names)
    assert set(names) == {"Au", "Cu_0.5"}
    assert attrs["species_at_sites"] == ["Cu_0.5", "Au", "Cu_0.5"]
    by_name = {sp["name"]: sp for sp in attrs["species"]}
    assert by_name["Cu_0.5"]["chemical_symbols"] == ["Cu"]
    assert by_name["Cu_0.5"]["concentration"] == [0.5]


def test_fractional_positions_converted():
    structure = ParsedStructure(
        sites=(Site("Na", (0.5, 0.5, 0.5)),),
        lattice=((2.0, 0.0, 0.0), (0.0, 3.0, 0.0), (0.0, 0.0, 4.0)),
        periodic=(True, True, True),
        positions_fractional=True,
    )
    attrs = derive_attributes(structure)
    assert attrs["cartesian_site_positions"] == [pytest.approx([1.0, 1.5, 2.0])]
    assert attrs["lattice_vectors"] == [[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]]
    assert attrs["dimension_types"] == [1, 1, 1]
    assert attrs["nperiodic_dimensions"] == 3


def test_singular_lattice_rejected():
    structure = ParsedStructure(
        sites=(Site("Na", (0, 0, 0)),),
        lattice=((1.0, 0.0, 0.0), (2.0, 0.0, 0.0), (0.0, 0.0, 1.0)),
        periodic=(True, True, True),
    )
    with pytest.raises(ConvertError, match="singular"):
        derive_attributes(structure)


_POOL = ["H", "C", "N", "O", "Na", "Mg", "Al", "Si", "Fe", "Cu", "Ag", "W"]


def test_formulas_match_oracle_over_many_compositions():
    rng = random.Random(11)
    for _ in range(500):
        elements = rng.sample(_POOL, rng.randint(1, 5))
        counts = {el: rng.randint(1, 12) for el in elements}
        amounts = element_amounts(_structure_from_counts(counts))
        assert reduced_formula(amounts) == reduced_formula_oracle(counts)
        assert anonymous_formula(amounts) == anonymous_formula_oracle(counts)
        attrs = derive_attributes(_structure_from_counts(counts))
        assert attrs["elements_ratios"] == pytest.approx(
            ratios_oracle(counts), rel=1e-12
        )
        assert abs(sum(attrs["elements_ratios"]) - 1.0) <= 1e-9


def test_formula_invariant_under_scaling_and_order():
    counts = {"Ti": 2, "O": 4}
    base = derive_attributes(_structure_from_counts(counts))
    scaled = derive_attributes(_structure_from_counts({"Ti": 6, "O": 12}))
    assert scaled["chemical_formula_reduced"] == base["chemical_formula_reduced"]
    assert scaled["elements_ratios"] == pytest.approx(base["elements_ratios"])

    shuffled_sites = (
        Site("O", (0, 0, 0)),
        Site("Ti", (1, 0, 0)),
        Site("O", (2, 0, 0)),
        Site("O", (3, 0, 0)),
        Site("Ti", (4, 0, 0)),
        Site("O", (5, 0, 0)),
    )
    reordered = derive_attributes(ParsedStructure(sites=shuffled_sites))
    assert reordered["chemical_formula_reduced"] == base["chemical_formula_reduced"]
    assert reordered["chemical_formula_anonymous"] == base["chemical_formula_anonymous"]


def test_property_info_covers_all_served_attributes():
    attrs = derive_attributes(_structure_from_counts({"Si": 1}))
    for name in attrs:
        assert name in STANDARD_PROPERTY_INFO
    assert {"id", "type"} <= set(STANDARD_PROPERTY_INFO)
