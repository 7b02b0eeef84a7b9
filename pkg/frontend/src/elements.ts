/**
 * Periodic table layout for the element selector: 18 columns, the seven
 * main periods, and the two f-block rows placed underneath.
 */

export interface ElementCell {
  symbol: string;
  row: number;
  column: number;
}

const LAYOUT: string[][] = [
  ["H", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "He"],
  ["Li", "Be", "", "", "", "", "", "", "", "", "", "", "B", "C", "N", "O", "F", "Ne"],
  ["Na", "Mg", "", "", "", "", "", "", "", "", "", "", "Al", "Si", "P", "S", "Cl", "Ar"],
  ["K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr"],
  ["Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I", "Xe"],
  ["Cs", "Ba", "La", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn"],
  ["Fr", "Ra", "Ac", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"],
  ["", "", "", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", ""],
  ["", "", "", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", ""],
];

export const ELEMENT_CELLS: ElementCell[] = LAYOUT.flatMap((rowSymbols, rowIndex) =>
  rowSymbols.flatMap((symbol, columnIndex) =>
    symbol === ""
      ? []
      : [{ symbol, row: rowIndex + 1, column: columnIndex + 1 }],
  ),
);

export const ELEMENT_SYMBOLS: ReadonlySet<string> = new Set(
  ELEMENT_CELLS.map((cell) => cell.symbol),
);
