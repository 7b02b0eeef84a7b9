"""Format-neutral parsed structure and the cell-parameter/lattice-vector conventions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elements import is_element
from .errors import StructureParseError

Vec3 = tuple[float, float, float]
Matrix3 = tuple[Vec3, Vec3, Vec3]


@dataclass(frozen=True)
class Site:
    element: str
    position: Vec3
    occupancy: float = 1.0


@dataclass(frozen=True)
class ParsedStructure:
    """Intermediate crystal/molecule representation shared by all file parsers.

    ``positions_fractional`` tells whether site positions are fractional
    coordinates of ``lattice`` (rows are the a, b, c vectors in ångström) or
    plain cartesian ångström coordinates.
    """

    sites: tuple[Site, ...]
    lattice: Matrix3 | None = None
    periodic: tuple[bool, bool, bool] = (False, False, False)
    positions_fractional: bool = False
    source_path: str = ""

    def __post_init__(self) -> None:
        if self.lattice is None:
            if any(self.periodic):
                raise StructureParseError("periodic flags set without a lattice")
            if self.positions_fractional:
                raise StructureParseError("fractional positions require a lattice")
        if not self.sites:
            raise StructureParseError("structure has no sites")
        for site in self.sites:
            if not is_element(site.element):
                raise StructureParseError(f"unknown element symbol {site.element!r}")
            if not 0.0 < site.occupancy <= 1.0:
                raise StructureParseError(
                    f"occupancy {site.occupancy} out of range (0, 1] on {site.element}"
                )


def cell_to_vectors(
    a: float, b: float, c: float, alpha: float, beta: float, gamma: float
) -> Matrix3:
    """Build lattice vectors from cell lengths (Å) and angles (degrees).

    Convention: a along x, b in the xy plane at angle gamma from a, c fixed by
    alpha and beta with a positive z component.
    """
    if min(a, b, c) <= 0:
        raise StructureParseError("cell lengths must be positive")
    al, be, ga = (math.radians(x) for x in (alpha, beta, gamma))
    sin_ga = math.sin(ga)
    if abs(sin_ga) < 1e-12:
        raise StructureParseError("cell angle gamma degenerate")
    bx = b * math.cos(ga)
    by = b * sin_ga
    cx = c * math.cos(be)
    cy = c * (math.cos(al) - math.cos(be) * math.cos(ga)) / sin_ga
    cz_sq = c * c - cx * cx - cy * cy
    if cz_sq <= 0:
        raise StructureParseError("cell angles do not define a valid cell")
    cz = math.sqrt(cz_sq)
    return ((a, 0.0, 0.0), (bx, by, 0.0), (cx, cy, cz))


def vectors_to_cell(lattice: Matrix3) -> tuple[float, float, float, float, float, float]:
    """Recover (a, b, c, alpha, beta, gamma) from lattice row vectors."""

    def norm(v: Vec3) -> float:
        return math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)

    def angle(u: Vec3, v: Vec3) -> float:
        dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
        cosang = dot / (norm(u) * norm(v))
        return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))

    va, vb, vc = lattice
    return (
        norm(va),
        norm(vb),
        norm(vc),
        angle(vb, vc),
        angle(va, vc),
        angle(va, vb),
    )


def fractional_to_cartesian(frac: Vec3, lattice: Matrix3) -> Vec3:
    fa, fb, fc = frac
    va, vb, vc = lattice
    return (
        fa * va[0] + fb * vb[0] + fc * vc[0],
        fa * va[1] + fb * vb[1] + fc * vc[1],
        fa * va[2] + fb * vb[2] + fc * vc[2],
    )


def lattice_determinant(lattice: Matrix3) -> float:
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = lattice
    return (
        a1 * (b2 * c3 - b3 * c2)
        - a2 * (b1 * c3 - b3 * c1)
        + a3 * (b1 * c2 - b2 * c1)
    )
