"""Periodic table symbols accepted in structure files."""

from __future__ import annotations

# Atomic-number order, H (1) through Og (118).
SYMBOLS: tuple[str, ...] = (
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
)

SYMBOL_SET: frozenset[str] = frozenset(SYMBOLS)


def is_element(symbol: str) -> bool:
    return symbol in SYMBOL_SET


def element_from_label(label: str) -> str | None:
    """Extract the element symbol from an atom-site label such as ``Si1`` or ``O2-``.

    Takes the leading alphabetic run and tries the two-character symbol before
    the one-character one, so ``Sn1`` resolves to Sn rather than S.
    """
    head = ""
    for ch in label:
        if ch.isalpha():
            head += ch
        else:
            break
    if not head:
        return None
    for candidate in (head[:2].capitalize(), head[:1].capitalize()):
        if candidate in SYMBOL_SET:
            return candidate
    return None
