/**
 * Downloadable structure text assembled purely from entry attributes: an
 * (extended) XYZ frame and a minimal P1 CIF. Positions are written with
 * enough digits that re-parsing reproduces them to well under 1e-6 Å.
 */

import type { StructureAttributes } from "./api.js";

function fmt(value: number): string {
  return value.toFixed(8);
}

/** Chemical symbol for each site, resolved through the species table. */
export function siteSymbols(attributes: StructureAttributes): string[] {
  const names = attributes.species_at_sites ?? [];
  const bySpecies = new Map<string, string>();
  for (const species of attributes.species ?? []) {
    bySpecies.set(species.name, species.chemical_symbols[0] ?? species.name);
  }
  return names.map((name) => bySpecies.get(name) ?? name);
}

/**
 * XYZ text for one entry. Periodic structures carry their cell in the
 * comment line (`Lattice="..."`); molecules get a plain comment.
 */
export function toXyz(id: string, attributes: StructureAttributes): string {
  const positions = attributes.cartesian_site_positions ?? [];
  const symbols = siteSymbols(attributes);
  if (positions.length === 0 || symbols.length !== positions.length) {
    throw new Error(`entry ${id} has no consistent site data`);
  }
  const lattice = attributes.lattice_vectors ?? null;
  const comment =
    lattice !== null
      ? `Lattice="${lattice.flat().map(fmt).join(" ")}"`
      : `exported from ${id}`;
  const lines = [String(positions.length), comment];
  positions.forEach((position, index) => {
    lines.push(
      `${symbols[index]} ${fmt(position[0])} ${fmt(position[1])} ${fmt(position[2])}`,
    );
  });
  return lines.join("\n") + "\n";
}

function norm(v: number[]): number {
  return Math.hypot(v[0], v[1], v[2]);
}

function angleDegrees(u: number[], v: number[]): number {
  const cosine = (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) / (norm(u) * norm(v));
  return (Math.acos(Math.min(1, Math.max(-1, cosine))) * 180) / Math.PI;
}

/** Invert a 3x3 matrix given as rows; throws on a singular cell. */
export function invert3(m: number[][]): number[][] {
  const [a, b, c] = m;
  const cofactors = [
    [b[1] * c[2] - b[2] * c[1], c[1] * a[2] - c[2] * a[1], a[1] * b[2] - a[2] * b[1]],
    [b[2] * c[0] - b[0] * c[2], c[2] * a[0] - c[0] * a[2], a[2] * b[0] - a[0] * b[2]],
    [b[0] * c[1] - b[1] * c[0], c[0] * a[1] - c[1] * a[0], a[0] * b[1] - a[1] * b[0]],
  ];
  const det = a[0] * cofactors[0][0] + a[1] * cofactors[1][0] + a[2] * cofactors[2][0];
  if (Math.abs(det) < 1e-12) {
    throw new Error("lattice is singular");
  }
  return cofactors.map((row) => row.map((value) => value / det));
}

/**
 * Minimal P1 CIF for a periodic entry: cell parameters plus fractional
 * coordinates computed from the cartesian positions. Throws for entries
 * without lattice vectors (molecules have no cell to write).
 */
export function toCif(id: string, attributes: StructureAttributes): string {
  const lattice = attributes.lattice_vectors ?? null;
  if (lattice === null) {
    throw new Error(`entry ${id} has no lattice; export it as XYZ instead`);
  }
  const positions = attributes.cartesian_site_positions ?? [];
  const symbols = siteSymbols(attributes);
  if (positions.length === 0 || symbols.length !== positions.length) {
    throw new Error(`entry ${id} has no consistent site data`);
  }
  const [va, vb, vc] = lattice;
  const inverse = invert3(lattice);
  const lines = [
    `data_${id.replace(/[^A-Za-z0-9_-]/g, "_")}`,
    `_cell_length_a ${norm(va).toFixed(6)}`,
    `_cell_length_b ${norm(vb).toFixed(6)}`,
    `_cell_length_c ${norm(vc).toFixed(6)}`,
    `_cell_angle_alpha ${angleDegrees(vb, vc).toFixed(4)}`,
    `_cell_angle_beta ${angleDegrees(va, vc).toFixed(4)}`,
    `_cell_angle_gamma ${angleDegrees(va, vb).toFixed(4)}`,
    "loop_",
    "_atom_site_label",
    "_atom_site_type_symbol",
    "_atom_site_fract_x",
    "_atom_site_fract_y",
    "_atom_site_fract_z",
  ];
  positions.forEach((p, index) => {
    // Row-vector convention: cartesian = fractional · lattice.
    const fx = p[0] * inverse[0][0] + p[1] * inverse[1][0] + p[2] * inverse[2][0];
    const fy = p[0] * inverse[0][1] + p[1] * inverse[1][1] + p[2] * inverse[2][1];
    const fz = p[0] * inverse[0][2] + p[1] * inverse[1][2] + p[2] * inverse[2][2];
    const symbol = symbols[index];
    lines.push(
      `${symbol}${index + 1} ${symbol} ${fx.toFixed(6)} ${fy.toFixed(6)} ${fz.toFixed(6)}`,
    );
  });
  return lines.join("\n") + "\n";
}
