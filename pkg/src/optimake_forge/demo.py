"""Generators for small self-describing datasets, used by tests and quick demos.

The standard demo dataset contains 20 structures (8 binary rock-salt cells and
12 ternary perovskite cells) packed into ``structures.zip``, a CSV property
table keyed by entry id, and a manifest wiring everything together.
"""

from __future__ import annotations

import io
import random
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import yaml

_BINARY_PAIRS = [
    ("Na", "Cl"),
    ("K", "Br"),
    ("Li", "F"),
    ("Mg", "O"),
    ("Ca", "S"),
    ("Sr", "Se"),
    ("Ba", "Te"),
    ("Cs", "I"),
]

_TERNARY_TRIPLES = [
    (a, b, "O")
    for a in ("Ca", "Sr", "Ba", "Pb", "Mg", "Cd")
    for b in ("Ti", "Zr")
]


@dataclass
class DemoDataset:
    """What was written and, by construction, what the converted output holds."""

    root: Path
    ids: list[str]
    binary_ids: list[str]
    ternary_ids: list[str]
    property_values: dict[str, dict[str, float]] = field(default_factory=dict)


def _rocksalt_cif(elements: tuple[str, str], a: float) -> str:
    lines = [
        "data_demo",
        f"_cell_length_a {a:.3f}",
        f"_cell_length_b {a:.3f}",
        f"_cell_length_c {a:.3f}",
        "_cell_angle_alpha 90.0",
        "_cell_angle_beta 90.0",
        "_cell_angle_gamma 90.0",
        "loop_",
        "_atom_site_type_symbol",
        "_atom_site_fract_x",
        "_atom_site_fract_y",
        "_atom_site_fract_z",
        f"{elements[0]} 0.0 0.0 0.0",
        f"{elements[1]} 0.5 0.5 0.5",
        "",
    ]
    return "\n".join(lines)


def _perovskite_cif(elements: tuple[str, str, str], a: float) -> str:
    lines = [
        "data_demo",
        f"_cell_length_a {a:.3f}",
        f"_cell_length_b {a:.3f}",
        f"_cell_length_c {a:.3f}",
        "_cell_angle_alpha 90.0",
        "_cell_angle_beta 90.0",
        "_cell_angle_gamma 90.0",
        "loop_",
        "_atom_site_type_symbol",
        "_atom_site_fract_x",
        "_atom_site_fract_y",
        "_atom_site_fract_z",
        f"{elements[0]} 0.0 0.0 0.0",
        f"{elements[1]} 0.5 0.5 0.5",
        f"{elements[2]} 0.5 0.5 0.0",
        f"{elements[2]} 0.5 0.0 0.5",
        f"{elements[2]} 0.0 0.5 0.5",
        "",
    ]
    return "\n".join(lines)


def write_demo_dataset(
    root: Path,
    *,
    seed: int = 0,
    properties: dict[str, tuple[float, float]] | None = None,
    property_units: dict[str, str] | None = None,
    description: str = "Demo dataset of binary and ternary oxides",
) -> DemoDataset:
    """Write a complete dataset directory under ``root`` and describe it.

    ``properties`` maps property names to uniform sampling ranges; the default
    is a single ``energy`` column in eV/atom.
    """
    if properties is None:
        properties = {"energy": (-5.0, 0.0)}
        property_units = {"energy": "eV/atom"}
    property_units = property_units or {}
    rng = random.Random(seed)
    root.mkdir(parents=True, exist_ok=True)

    binary_ids = [f"set1/{101 + i}" for i in range(len(_BINARY_PAIRS))]
    ternary_ids = [f"set2/{109 + i}" for i in range(len(_TERNARY_TRIPLES))]

    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        for entry_id, pair in zip(binary_ids, _BINARY_PAIRS):
            a = 4.0 + rng.random()
            archive.writestr(f"cifs/{entry_id}.cif", _rocksalt_cif(pair, a))
        for entry_id, triple in zip(ternary_ids, _TERNARY_TRIPLES):
            a = 3.8 + rng.random() * 0.4
            archive.writestr(f"cifs/{entry_id}.cif", _perovskite_cif(triple, a))
    (root / "structures.zip").write_bytes(buffer.getvalue())

    ids = sorted(binary_ids + ternary_ids)
    values: dict[str, dict[str, float]] = {
        entry_id: {
            name: round(rng.uniform(low, high), 6)
            for name, (low, high) in properties.items()
        }
        for entry_id in ids
    }
    header = ["id", *properties.keys()]
    csv_lines = [",".join(header)]
    csv_lines += [
        ",".join([entry_id, *(repr(values[entry_id][name]) for name in properties)])
        for entry_id in ids
    ]
    (root / "properties.csv").write_text("\n".join(csv_lines) + "\n", "utf-8")

    manifest = {
        "config_version": "1",
        "database_description": description,
        "provider_prefix": "local",
        "entries": [
            {
                "entry_type": "structures",
                "entry_paths": [{"file": "structures.zip", "matches": ["*.cif"]}],
                "property_paths": ["properties.csv"],
                "property_definitions": [
                    {
                        "name": name,
                        "title": name.replace("_", " ").capitalize(),
                        "description": f"Demo property {name}",
                        "type": "float",
                        **({"unit": property_units[name]} if name in property_units else {}),
                    }
                    for name in properties
                ],
            }
        ],
    }
    (root / "optimade.yaml").write_text(
        yaml.safe_dump(manifest, sort_keys=False), "utf-8"
    )

    return DemoDataset(
        root=root,
        ids=ids,
        binary_ids=sorted(binary_ids),
        ternary_ids=sorted(ternary_ids),
        property_values=values,
    )


def write_scale_dataset(root: Path, count: int = 10_000, seed: int = 7) -> list[str]:
    """Write ``count`` plain-XYZ molecules into a zip; returns the expected ids."""
    rng = random.Random(seed)
    root.mkdir(parents=True, exist_ok=True)
    width = len(str(count - 1))

    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_STORED) as archive:
        for i in range(count):
            coords = [
                f"{rng.uniform(0.0, 4.0):.6f} {rng.uniform(0.0, 4.0):.6f} {rng.uniform(0.0, 4.0):.6f}"
                for _ in range(2)
            ]
            text = f"2\nframe {i}\nNa {coords[0]}\nCl {coords[1]}\n"
            archive.writestr(f"xyz/{i:0{width}d}.xyz", text)
    (root / "frames.zip").write_bytes(buffer.getvalue())

    manifest = {
        "config_version": "1",
        "database_description": f"Synthetic benchmark of {count} molecules",
        "entries": [
            {
                "entry_type": "structures",
                "entry_paths": [{"file": "frames.zip", "matches": ["*.xyz"]}],
            }
        ],
    }
    (root / "optimade.yaml").write_text(
        yaml.safe_dump(manifest, sort_keys=False), "utf-8"
    )
    return [f"{i:0{width}d}" for i in range(count)]
