/**
 * OPTIMADE filter strings on the client side: a tokenizer, a recursive
 * descent parser, and a canonical renderer.
 *
 * The parser gives immediate syntax feedback on manually edited filter text
 * before any request is sent; the renderer turns widget state (and parsed
 * trees) into canonical text. Canonical form: single spaces around keywords,
 * no spaces around comparison operators, values in lists joined by a bare
 * comma, and only the parentheses required to reproduce the tree.
 */

export type Value = string | number;

export type ComparisonOp = "=" | "!=" | "<" | "<=" | ">" | ">=";

export type StringMode = "contains" | "starts" | "ends";

export type SetMode = "has" | "all" | "any" | "only";

export type FilterNode =
  | { kind: "or"; left: FilterNode; right: FilterNode }
  | { kind: "and"; left: FilterNode; right: FilterNode }
  | { kind: "not"; operand: FilterNode }
  | { kind: "comparison"; property: string; op: ComparisonOp; value: Value }
  | { kind: "match"; property: string; mode: StringMode; value: string }
  | { kind: "set"; property: string; mode: SetMode; values: Value[] }
  | { kind: "length"; property: string; op: ComparisonOp; value: number }
  | { kind: "known"; property: string; negated: boolean };

export class FilterSyntaxError extends Error {
  constructor(
    detail: string,
    readonly offset: number,
  ) {
    super(`${detail} (at character ${offset})`);
    this.name = "FilterSyntaxError";
  }
}

const KEYWORDS = new Set([
  "AND",
  "OR",
  "NOT",
  "HAS",
  "ALL",
  "ANY",
  "ONLY",
  "LENGTH",
  "IS",
  "KNOWN",
  "UNKNOWN",
  "CONTAINS",
  "STARTS",
  "ENDS",
  "WITH",
]);

const COMPARISON_OPS: ComparisonOp[] = ["<=", ">=", "!=", "<", ">", "="];

const STRING_MODES: Record<string, StringMode> = {
  CONTAINS: "contains",
  STARTS: "starts",
  ENDS: "ends",
};

const SET_MODES: Record<string, SetMode> = {
  ALL: "all",
  ANY: "any",
  ONLY: "only",
};

interface Token {
  type: "ident" | "keyword" | "number" | "string" | "op" | "lparen" | "rparen" | "comma" | "end";
  text: string;
  value: Value;
  offset: number;
}

const IDENT_RE = /^[a-z_][a-z_0-9]*$/;
const WORD_RE = /[A-Za-z_][A-Za-z_0-9]*/y;
const NUMBER_RE = /[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?/y;

function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (ch === " " || ch === "\t" || ch === "\n" || ch === "\r") {
      i += 1;
      continue;
    }
    if (ch === "(") {
      tokens.push({ type: "lparen", text: ch, value: ch, offset: i });
      i += 1;
      continue;
    }
    if (ch === ")") {
      tokens.push({ type: "rparen", text: ch, value: ch, offset: i });
      i += 1;
      continue;
    }
    if (ch === ",") {
      tokens.push({ type: "comma", text: ch, value: ch, offset: i });
      i += 1;
      continue;
    }
    const op = COMPARISON_OPS.find((candidate) => text.startsWith(candidate, i));
    if (op !== undefined) {
      tokens.push({ type: "op", text: op, value: op, offset: i });
      i += op.length;
      continue;
    }
    if (ch === '"') {
      const { value, end } = readString(text, i);
      tokens.push({ type: "string", text: text.slice(i, end), value, offset: i });
      i = end;
      continue;
    }
    NUMBER_RE.lastIndex = i;
    const mayStartNumber = (ch >= "0" && ch <= "9") || ch === "+" || ch === "-" || ch === ".";
    const numberMatch = mayStartNumber ? NUMBER_RE.exec(text) : null;
    if (numberMatch !== null) {
      const end = i + numberMatch[0].length;
      if (end < text.length && /[A-Za-z_0-9.]/.test(text[end])) {
        throw new FilterSyntaxError(`malformed number '${text.slice(i, end + 1)}'`, i);
      }
      tokens.push({
        type: "number",
        text: numberMatch[0],
        value: Number(numberMatch[0]),
        offset: i,
      });
      i = end;
      continue;
    }
    WORD_RE.lastIndex = i;
    const wordMatch = WORD_RE.exec(text);
    if (wordMatch !== null) {
      const word = wordMatch[0];
      if (IDENT_RE.test(word)) {
        tokens.push({ type: "ident", text: word, value: word, offset: i });
      } else if (KEYWORDS.has(word)) {
        tokens.push({ type: "keyword", text: word, value: word, offset: i });
      } else {
        throw new FilterSyntaxError(
          `'${word}' is neither a property name nor a keyword`,
          i,
        );
      }
      i += word.length;
      continue;
    }
    throw new FilterSyntaxError(`unexpected character '${ch}'`, i);
  }
  tokens.push({ type: "end", text: "", value: "", offset: text.length });
  return tokens;
}

function readString(text: string, start: number): { value: string; end: number } {
  let value = "";
  let i = start + 1;
  while (i < text.length) {
    const ch = text[i];
    if (ch === "\\") {
      const next = text[i + 1];
      if (next === '"' || next === "\\") {
        value += next;
        i += 2;
        continue;
      }
      throw new FilterSyntaxError(`invalid escape '\\${next ?? ""}'`, i);
    }
    if (ch === '"') {
      return { value, end: i + 1 };
    }
    value += ch;
    i += 1;
  }
  throw new FilterSyntaxError("unterminated string", start);
}

class Parser {
  private position = 0;

  constructor(private readonly tokens: Token[]) {}

  private peek(): Token {
    return this.tokens[this.position];
  }

  private advance(): Token {
    const token = this.tokens[this.position];
    this.position += 1;
    return token;
  }

  private expectKeyword(word: string): void {
    const token = this.peek();
    if (token.type !== "keyword" || token.text !== word) {
      throw new FilterSyntaxError(`expected ${word}`, token.offset);
    }
    this.advance();
  }

  private atKeyword(word: string): boolean {
    const token = this.peek();
    return token.type === "keyword" && token.text === word;
  }

  parse(): FilterNode {
    const node = this.expression();
    const token = this.peek();
    if (token.type !== "end") {
      throw new FilterSyntaxError(`unexpected trailing '${token.text}'`, token.offset);
    }
    return node;
  }

  private expression(): FilterNode {
    let node = this.conjunction();
    while (this.atKeyword("OR")) {
      this.advance();
      node = { kind: "or", left: node, right: this.conjunction() };
    }
    return node;
  }

  private conjunction(): FilterNode {
    let node = this.unary();
    while (this.atKeyword("AND")) {
      this.advance();
      node = { kind: "and", left: node, right: this.unary() };
    }
    return node;
  }

  private unary(): FilterNode {
    if (this.atKeyword("NOT")) {
      this.advance();
      return { kind: "not", operand: this.atom() };
    }
    return this.atom();
  }

  private atom(): FilterNode {
    const token = this.peek();
    if (token.type === "lparen") {
      this.advance();
      const node = this.expression();
      const closing = this.peek();
      if (closing.type !== "rparen") {
        throw new FilterSyntaxError("expected ')'", closing.offset);
      }
      this.advance();
      return node;
    }
    if (token.type === "number" || token.type === "string") {
      return this.valueFirstComparison();
    }
    if (token.type === "ident") {
      return this.predicate();
    }
    throw new FilterSyntaxError("expected a predicate or '('", token.offset);
  }

  private valueFirstComparison(): FilterNode {
    const valueToken = this.advance();
    const opToken = this.peek();
    if (opToken.type !== "op") {
      throw new FilterSyntaxError("expected a comparison operator", opToken.offset);
    }
    this.advance();
    const propertyToken = this.peek();
    if (propertyToken.type !== "ident") {
      throw new FilterSyntaxError("expected a property name", propertyToken.offset);
    }
    this.advance();
    return {
      kind: "comparison",
      property: propertyToken.text,
      op: mirrorOp(opToken.text as ComparisonOp),
      value: valueToken.value,
    };
  }

  private predicate(): FilterNode {
    const property = this.advance().text;
    const token = this.peek();
    if (token.type === "op") {
      this.advance();
      return {
        kind: "comparison",
        property,
        op: token.text as ComparisonOp,
        value: this.literal(),
      };
    }
    if (this.atKeyword("IS")) {
      this.advance();
      if (this.atKeyword("KNOWN")) {
        this.advance();
        return { kind: "known", property, negated: false };
      }
      if (this.atKeyword("UNKNOWN")) {
        this.advance();
        return { kind: "known", property, negated: true };
      }
      throw new FilterSyntaxError("expected KNOWN or UNKNOWN", this.peek().offset);
    }
    if (this.atKeyword("HAS")) {
      this.advance();
      let mode: SetMode = "has";
      const modeToken = this.peek();
      if (modeToken.type === "keyword" && modeToken.text in SET_MODES) {
        mode = SET_MODES[modeToken.text];
        this.advance();
      }
      const values: Value[] = [this.literal()];
      while (this.peek().type === "comma") {
        this.advance();
        values.push(this.literal());
      }
      if (mode === "has" && values.length > 1) {
        throw new FilterSyntaxError(
          "plain HAS takes a single value; use HAS ALL/ANY/ONLY for lists",
          token.offset,
        );
      }
      return { kind: "set", property, mode, values };
    }
    if (this.atKeyword("LENGTH")) {
      this.advance();
      let op: ComparisonOp = "=";
      const opToken = this.peek();
      if (opToken.type === "op") {
        op = opToken.text as ComparisonOp;
        this.advance();
      }
      const valueToken = this.peek();
      if (valueToken.type !== "number") {
        throw new FilterSyntaxError("LENGTH needs a number", valueToken.offset);
      }
      this.advance();
      return { kind: "length", property, op, value: valueToken.value as number };
    }
    const stringModeToken = this.peek();
    if (stringModeToken.type === "keyword" && stringModeToken.text in STRING_MODES) {
      this.advance();
      if (stringModeToken.text !== "CONTAINS") {
        this.expectKeyword("WITH");
      }
      const valueToken = this.peek();
      if (valueToken.type !== "string") {
        throw new FilterSyntaxError("expected a quoted string", valueToken.offset);
      }
      this.advance();
      return {
        kind: "match",
        property,
        mode: STRING_MODES[stringModeToken.text],
        value: valueToken.value as string,
      };
    }
    throw new FilterSyntaxError(
      "expected a comparison operator, HAS, LENGTH, IS, CONTAINS, STARTS, or ENDS",
      token.offset,
    );
  }

  private literal(): Value {
    const token = this.peek();
    if (token.type === "number" || token.type === "string") {
      this.advance();
      return token.value;
    }
    if (token.type === "ident") {
      throw new FilterSyntaxError(
        "comparing two properties is not supported",
        token.offset,
      );
    }
    throw new FilterSyntaxError("expected a number or a quoted string", token.offset);
  }
}

function mirrorOp(op: ComparisonOp): ComparisonOp {
  switch (op) {
    case "<":
      return ">";
    case "<=":
      return ">=";
    case ">":
      return "<";
    case ">=":
      return "<=";
    default:
      return op;
  }
}

/** Parse filter text, raising FilterSyntaxError with a character offset. */
export function parseFilter(text: string): FilterNode {
  return new Parser(tokenize(text)).parse();
}

/** Render a value as canonical filter text. */
export function renderValue(value: Value): string {
  if (typeof value === "number") {
    return String(value);
  }
  return `"${value.replace(/\\/g, "\\\\").replace(/"/g, '\\"')}"`;
}

const SET_MODE_TEXT: Record<SetMode, string> = {
  has: "HAS",
  all: "HAS ALL",
  any: "HAS ANY",
  only: "HAS ONLY",
};

const STRING_MODE_TEXT: Record<StringMode, string> = {
  contains: "CONTAINS",
  starts: "STARTS WITH",
  ends: "ENDS WITH",
};

function renderChild(
  child: FilterNode,
  parent: "or" | "and" | "not",
  side: "left" | "right",
): string {
  const text = renderNode(child);
  let parenthesize: boolean;
  switch (parent) {
    case "or":
      parenthesize = child.kind === "or" && side === "right";
      break;
    case "and":
      parenthesize =
        child.kind === "or" || (child.kind === "and" && side === "right");
      break;
    case "not":
      parenthesize =
        child.kind === "or" || child.kind === "and" || child.kind === "not";
      break;
  }
  return parenthesize ? `(${text})` : text;
}

function renderNode(node: FilterNode): string {
  switch (node.kind) {
    case "or":
      return `${renderChild(node.left, "or", "left")} OR ${renderChild(node.right, "or", "right")}`;
    case "and":
      return `${renderChild(node.left, "and", "left")} AND ${renderChild(node.right, "and", "right")}`;
    case "not":
      return `NOT ${renderChild(node.operand, "not", "left")}`;
    case "comparison":
      return `${node.property}${node.op}${renderValue(node.value)}`;
    case "match":
      return `${node.property} ${STRING_MODE_TEXT[node.mode]} ${renderValue(node.value)}`;
    case "set":
      return `${node.property} ${SET_MODE_TEXT[node.mode]} ${node.values.map(renderValue).join(",")}`;
    case "length":
      return node.op === "="
        ? `${node.property} LENGTH ${node.value}`
        : `${node.property} LENGTH ${node.op} ${node.value}`;
    case "known":
      return `${node.property} IS ${node.negated ? "UNKNOWN" : "KNOWN"}`;
  }
}

/** Render a parsed filter back to canonical text with minimal parentheses. */
export function renderFilter(node: FilterNode): string {
  return renderNode(node);
}
