"""Derivation of the standard per-entry structure attributes.

Covers element bookkeeping, reduced/anonymous formulas, lattice and site
geometry, species grouping for partial occupancies, and the metadata used to
describe every standard attribute in info documents.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from .errors import ConvertError
from .structures import (
    ParsedStructure,
    fractional_to_cartesian,
    lattice_determinant,
)

SINGULAR_LATTICE_THRESHOLD = 1e-12  # ų

# Name -> info-document metadata for every attribute this toolkit serves.
STANDARD_PROPERTY_INFO: dict[str, dict[str, str]] = {
    "id": {"type": "string", "description": "unique entry identifier"},
    "type": {"type": "string", "description": "entry type, always 'structures'"},
    "elements": {"type": "list", "description": "chemical symbols, alphabetical"},
    "nelements": {"type": "integer", "description": "number of distinct elements"},
    "elements_ratios": {
        "type": "list",
        "description": "relative element proportions, aligned with elements",
    },
    "chemical_formula_reduced": {
        "type": "string",
        "description": "formula with counts divided by their gcd, elements alphabetical",
    },
    "chemical_formula_anonymous": {
        "type": "string",
        "description": "formula with elements replaced by letters in descending-count order",
    },
    "chemical_formula_descriptive": {
        "type": "string",
        "description": "free-form formula; equals the reduced formula here",
    },
    "dimension_types": {
        "type": "list",
        "description": "periodicity flags (1 periodic, 0 non-periodic) per lattice direction",
    },
    "nperiodic_dimensions": {
        "type": "integer",
        "description": "number of periodic directions",
    },
    "lattice_vectors": {
        "type": "list",
        "unit": "Å",
        "description": "rows are the a, b, c lattice vectors; null for non-periodic entries",
    },
    "cartesian_site_positions": {
        "type": "list",
        "unit": "Å",
        "description": "cartesian coordinates of every site",
    },
    "nsites": {"type": "integer", "description": "number of sites"},
    "species": {
        "type": "list",
        "description": "site species: name, chemical symbols, concentration",
    },
    "species_at_sites": {
        "type": "list",
        "description": "species name of each site, aligned with positions",
    },
    "structure_features": {
        "type": "list",
        "description": "special features; contains 'disorder' for partial occupancy",
    },
    "last_modified": {
        "type": "timestamp",
        "description": "last modification time; null in converted archives",
    },
}

STANDARD_ATTRIBUTE_NAMES: frozenset[str] = frozenset(STANDARD_PROPERTY_INFO)


def element_amounts(structure: ParsedStructure) -> dict[str, Fraction]:
    """Occupancy-weighted amount of each element, as exact rationals."""
    amounts: dict[str, Fraction] = {}
    for site in structure.sites:
        occ = Fraction(site.occupancy).limit_denominator(1_000_000)
        amounts[site.element] = amounts.get(site.element, Fraction(0)) + occ
    return amounts


def _integer_counts(amounts: dict[str, Fraction]) -> dict[str, int]:
    denom_lcm = 1
    for amount in amounts.values():
        denom_lcm = math.lcm(denom_lcm, amount.denominator)
    counts = {el: int(amount * denom_lcm) for el, amount in amounts.items()}
    divisor = math.gcd(*counts.values())
    return {el: n // divisor for el, n in counts.items()}


def reduced_formula(amounts: dict[str, Fraction]) -> str:
    counts = _integer_counts(amounts)
    return "".join(
        f"{el}{n}" if n > 1 else el for el, n in sorted(counts.items())
    )


def _anonymous_letter(index: int) -> str:
    if index < 26:
        return chr(ord("A") + index)
    return chr(ord("A") + index // 26 - 1) + chr(ord("a") + index % 26)


def anonymous_formula(amounts: dict[str, Fraction]) -> str:
    counts = _integer_counts(amounts)
    # Descending count; equal counts ordered by element symbol for determinism.
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return "".join(
        f"{_anonymous_letter(i)}{n}" if n > 1 else _anonymous_letter(i)
        for i, (_, n) in enumerate(ordered)
    )


def _species_name(element: str, occupancy: float) -> str:
    return element if occupancy == 1.0 else f"{element}_{occupancy!r}"


def derive_attributes(structure: ParsedStructure) -> dict[str, Any]:
    """Compute the full standard attribute set for one parsed structure."""
    lattice = structure.lattice
    if lattice is not None and abs(lattice_determinant(lattice)) < SINGULAR_LATTICE_THRESHOLD:
        raise ConvertError(f"singular lattice matrix in {structure.source_path!r}")

    if structure.positions_fractional:
        assert lattice is not None
        positions = [
            list(fractional_to_cartesian(site.position, lattice))
            for site in structure.sites
        ]
    else:
        positions = [list(site.position) for site in structure.sites]

    amounts = element_amounts(structure)
    elements = sorted(amounts)
    total = sum(amounts.values())
    ratios = [float(amounts[el] / total) for el in elements]

    species_keys: list[tuple[str, float]] = []
    for site in structure.sites:
        key = (site.element, site.occupancy)
        if key not in species_keys:
            species_keys.append(key)
    species = sorted(
        (
            {
                "name": _species_name(el, occ),
                "chemical_symbols": [el],
                "concentration": [occ],
            }
            for el, occ in species_keys
        ),
        key=lambda sp: sp["name"],
    )
    species_at_sites = [
        _species_name(site.element, site.occupancy) for site in structure.sites
    ]

    dimension_types = [1 if flag else 0 for flag in structure.periodic]
    nperiodic = sum(dimension_types)
    reduced = reduced_formula(amounts)

    return {
        "elements": elements,
        "nelements": len(elements),
        "elements_ratios": ratios,
        "chemical_formula_reduced": reduced,
        "chemical_formula_anonymous": anonymous_formula(amounts),
        "chemical_formula_descriptive": reduced,
        "dimension_types": dimension_types,
        "nperiodic_dimensions": nperiodic,
        "lattice_vectors": [list(row) for row in lattice] if nperiodic > 0 and lattice else None,
        "cartesian_site_positions": positions,
        "nsites": len(structure.sites),
        "species": species,
        "species_at_sites": species_at_sites,
        "structure_features": (
            ["disorder"] if any(site.occupancy < 1.0 for site in structure.sites) else []
        ),
        "last_modified": None,
    }
