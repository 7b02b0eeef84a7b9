import { describe, expect, it } from "vitest";

import {
  FilterSyntaxError,
  parseFilter,
  renderFilter,
  type ComparisonOp,
  type FilterNode,
  type SetMode,
  type Value,
} from "../src/filter.js";
import { emptyState, widgetFilter } from "../src/state.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("parsing", () => {
  it("parses a plain comparison", () => {
    expect(parseFilter("nelements=2")).toEqual({
      kind: "comparison",
      property: "nelements",
      op: "=",
      value: 2,
    });
  });

  it("mirrors value-first comparisons", () => {
    expect(parseFilter("3 < nelements")).toEqual({
      kind: "comparison",
      property: "nelements",
      op: ">",
      value: 3,
    });
  });

  it("applies NOT > AND > OR precedence", () => {
    const node = parseFilter('NOT a=1 AND b=2 OR c=3');
    expect(node.kind).toBe("or");
    if (node.kind === "or") {
      expect(node.left.kind).toBe("and");
      expect(node.right.kind).toBe("comparison");
    }
  });

  it("parses set, length, string, and known predicates", () => {
    expect(parseFilter('elements HAS "Si"')).toEqual({
      kind: "set",
      property: "elements",
      mode: "has",
      values: ["Si"],
    });
    expect(parseFilter('elements HAS ONLY "O","Si"')).toEqual({
      kind: "set",
      property: "elements",
      mode: "only",
      values: ["O", "Si"],
    });
    expect(parseFilter("elements LENGTH 3")).toEqual({
      kind: "length",
      property: "elements",
      op: "=",
      value: 3,
    });
    expect(parseFilter("elements LENGTH >= 2")).toEqual({
      kind: "length",
      property: "elements",
      op: ">=",
      value: 2,
    });
    expect(parseFilter('chemical_formula_reduced STARTS WITH "O"')).toEqual({
      kind: "match",
      property: "chemical_formula_reduced",
      mode: "starts",
      value: "O",
    });
    expect(parseFilter("_local_energy IS UNKNOWN")).toEqual({
      kind: "known",
      property: "_local_energy",
      negated: true,
    });
  });

  it("parses string escapes", () => {
    expect(parseFilter('name CONTAINS "a\\"b\\\\c"')).toEqual({
      kind: "match",
      property: "name",
      mode: "contains",
      value: 'a"b\\c',
    });
  });

  it.each([
    ["nelements =", "expected a number"],
    ['elements HAS', "expected a number"],
    ["(a=1", "expected ')'"],
    ['name CONTAINS 3', "expected a quoted string"],
    ["a = b", "comparing two properties"],
    ["NOT NOT a=1", "expected a predicate"],
    ['"unterminated', "unterminated string"],
    ["1two = 3", "malformed number"],
    ["a=1 and b=2", "unexpected trailing 'and'"],
    ["FROB a", "neither a property name nor a keyword"],
    ['x STARTS "a"', "expected WITH"],
  ])("rejects %j", (text, fragment) => {
    expect(() => parseFilter(text)).toThrowError(fragment);
  });

  it("reports the character offset of the problem", () => {
    try {
      parseFilter('elements HAS Zz');
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(FilterSyntaxError);
      expect((error as FilterSyntaxError).offset).toBe(13);
    }
  });
});

describe("rendering", () => {
  it("produces the canonical widget example", () => {
    const state = {
      ...emptyState(),
      include: ["Si", "O"],
      nelementsMin: 2,
      nelementsMax: 2,
    };
    expect(widgetFilter(state)).toBe(
      'elements HAS ALL "O","Si" AND nelements>=2 AND nelements<=2',
    );
  });

  it("is deterministic and alphabetical regardless of input order", () => {
    const a = { ...emptyState(), include: ["Si", "O", "Fe"], exclude: ["Cl", "Ba"] };
    const b = { ...emptyState(), include: ["Fe", "Si", "O"], exclude: ["Ba", "Cl"] };
    expect(widgetFilter(a)).toBe(widgetFilter(b));
    expect(widgetFilter(a)).toBe(
      'elements HAS ALL "Fe","O","Si" AND NOT elements HAS ANY "Ba","Cl"',
    );
  });

  it("renders widget states that round-trip through the parser", () => {
    const random = mulberry32(11);
    const pool = ["H", "O", "Si", "Fe", "Na", "Cl", "W", "Ti"];
    for (let i = 0; i < 200; i += 1) {
      const include = pool.filter(() => random() < 0.3);
      const exclude = pool
        .filter((symbol) => !include.includes(symbol))
        .filter(() => random() < 0.2);
      const state = {
        ...emptyState(),
        include,
        exclude,
        nelementsMin: random() < 0.5 ? 1 + Math.floor(random() * 4) : null,
        nelementsMax: random() < 0.5 ? 2 + Math.floor(random() * 6) : null,
        nsitesMin: random() < 0.3 ? 1 + Math.floor(random() * 10) : null,
        nsitesMax: random() < 0.3 ? 4 + Math.floor(random() * 20) : null,
      };
      const text = widgetFilter(state);
      if (text === "") {
        continue;
      }
      expect(renderFilter(parseFilter(text))).toBe(text);
    }
  });

  it("uses minimal parentheses", () => {
    expect(renderFilter(parseFilter("(a=1 AND b=2) OR c=3"))).toBe(
      "a=1 AND b=2 OR c=3",
    );
    expect(renderFilter(parseFilter("a=1 AND (b=2 OR c=3)"))).toBe(
      "a=1 AND (b=2 OR c=3)",
    );
    expect(renderFilter(parseFilter("NOT (a=1 OR b=2)"))).toBe(
      "NOT (a=1 OR b=2)",
    );
    expect(renderFilter(parseFilter("NOT a=1"))).toBe("NOT a=1");
  });
});

describe("random tree round trips", () => {
  const random = mulberry32(2718);

  const pick = <T>(items: T[]): T => items[Math.floor(random() * items.length)];

  const OPS: ComparisonOp[] = ["=", "!=", "<", "<=", ">", ">="];
  const PROPERTIES = ["nelements", "nsites", "_local_energy", "elements", "x_y"];
  const STRINGS = ["Si", "a b", 'quo"te', "back\\slash", "π"];
  const NUMBERS = [0, 1, 42, -3.25, 0.5, 1e-7, 2.5e21];

  function randomValue(): Value {
    return random() < 0.5 ? pick(STRINGS) : pick(NUMBERS);
  }

  function randomNode(depth: number): FilterNode {
    const roll = random();
    if (depth < 4 && roll < 0.4) {
      const kind = pick(["and", "or", "not"] as const);
      if (kind === "not") {
        return { kind, operand: randomNode(depth + 1) };
      }
      return {
        kind,
        left: randomNode(depth + 1),
        right: randomNode(depth + 1),
      };
    }
    const predicate = pick(["comparison", "match", "set", "length", "known"] as const);
    switch (predicate) {
      case "comparison":
        return {
          kind: "comparison",
          property: pick(PROPERTIES),
          op: pick(OPS),
          value: randomValue(),
        };
      case "match":
        return {
          kind: "match",
          property: pick(PROPERTIES),
          mode: pick(["contains", "starts", "ends"] as const),
          value: pick(STRINGS),
        };
      case "set": {
        const mode: SetMode = pick(["has", "all", "any", "only"] as const);
        const count = mode === "has" ? 1 : 1 + Math.floor(random() * 3);
        return {
          kind: "set",
          property: pick(PROPERTIES),
          mode,
          values: Array.from({ length: count }, randomValue),
        };
      }
      case "length":
        return {
          kind: "length",
          property: pick(PROPERTIES),
          op: pick(OPS),
          value: Math.floor(random() * 20),
        };
      case "known":
        return { kind: "known", property: pick(PROPERTIES), negated: random() < 0.5 };
    }
  }

  it("render -> parse reproduces 400 random trees exactly", () => {
    for (let i = 0; i < 400; i += 1) {
      const tree = randomNode(0);
      const text = renderFilter(tree);
      const reparsed = parseFilter(text);
      expect(reparsed).toEqual(tree);
      expect(renderFilter(reparsed)).toBe(text);
    }
  });
});
