"""Shared fixtures: the demo dataset, a converted archive, and a hand-built
50-entry collection with known, diverse attribute types."""

from __future__ import annotations

import random
from pathlib import Path
from typing import Any

import pytest

from optimake_forge.convert import convert_dataset
from optimake_forge.demo import DemoDataset, write_demo_dataset
from optimake_forge.jsonl import JsonLinesArchive, StructureEntry

_ELEMENT_POOL = ["O", "Si", "Fe", "Na", "Cl", "Ti", "Ba", "Mg", "Al", "Ca"]
_TAGS = ["stable", "metastable", "hypothetical", "experimental"]


def build_fifty_entries() -> tuple[list[StructureEntry], list[dict[str, Any]]]:
    """50 entries with ints, floats, strings, lists, and gaps, plus the same
    data flattened into plain row dicts for oracle-side evaluation."""
    rng = random.Random(42)
    entries: list[StructureEntry] = []
    rows: list[dict[str, Any]] = []
    for index in range(50):
        nelements = rng.randint(1, 4)
        elements = sorted(rng.sample(_ELEMENT_POOL, nelements))
        nsites = rng.randint(1, 12)
        periodic = rng.random() < 0.8
        attributes: dict[str, Any] = {
            "elements": elements,
            "nelements": nelements,
            "nsites": nsites,
            "chemical_formula_reduced": "".join(elements),
            "dimension_types": [1, 1, 1] if periodic else [0, 0, 0],
            "nperiodic_dimensions": 3 if periodic else 0,
            "lattice_vectors": (
                [[4.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 4.0]]
                if periodic
                else None
            ),
            "structure_features": [],
            "last_modified": None,
        }
        if rng.random() < 0.7:
            attributes["_local_energy"] = round(rng.uniform(-5.0, 0.0), 4)
        if rng.random() < 0.5:
            attributes["_local_tag"] = rng.choice(_TAGS)
        entry = StructureEntry(id=f"s{index:03d}", attributes=attributes)
        entries.append(entry)
        rows.append({"id": entry.id, "type": entry.type, **attributes})
    return entries, rows


FILTER_SCHEMA = {
    "nelements": "int",
    "nsites": "int",
    "_local_energy": "float",
    "_local_never_set": "float",
    "chemical_formula_reduced": "str",
    "_local_tag": "str",
    "elements": "strlist",
    "dimension_types": "intlist",
}

FILTER_POOLS: dict[str, list[Any]] = {
    "nelements": [1, 2, 3, 4],
    "nsites": [1, 3, 6, 12],
    "_local_energy": [-4.5, -2.0, -0.5, 0.0],
    "chemical_formula_reduced": ["ClNa", "OSi", "FeO", "BaTiO", "Al"],
    "_local_tag": _TAGS,
    "elements": _ELEMENT_POOL,
    "dimension_types": [0, 1],
}


@pytest.fixture(scope="session")
def fifty_entries() -> tuple[list[StructureEntry], list[dict[str, Any]]]:
    return build_fifty_entries()


@pytest.fixture()
def demo_dataset(tmp_path: Path) -> DemoDataset:
    return write_demo_dataset(tmp_path / "demo")


@pytest.fixture()
def demo_archive(demo_dataset: DemoDataset) -> JsonLinesArchive:
    return convert_dataset(demo_dataset.root)
