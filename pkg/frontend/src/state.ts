/**
 * The explorer's query state: which database is selected, which elements are
 * required or forbidden, numeric ranges, the filter textbox, and the page
 * offset. The whole state serializes into URL query parameters so a session
 * is shareable and survives reloads.
 */

import { renderValue } from "./filter.js";

export interface UiQueryState {
  /** Base URL of the selected database, e.g. "http://host/archives/demo". */
  base: string;
  /** Elements every result must contain (kept sorted). */
  include: string[];
  /** Elements no result may contain (kept sorted). */
  exclude: string[];
  nelementsMin: number | null;
  nelementsMax: number | null;
  nsitesMin: number | null;
  nsitesMax: number | null;
  /** The filter text actually sent; mirrors the widgets until edited. */
  filterText: string;
  /** Set once the user edits the textbox; widgets stop overwriting it. */
  manualFilter: boolean;
  offset: number;
}

export function emptyState(): UiQueryState {
  return {
    base: "",
    include: [],
    exclude: [],
    nelementsMin: null,
    nelementsMax: null,
    nsitesMin: null,
    nsitesMax: null,
    filterText: "",
    manualFilter: false,
    offset: 0,
  };
}

/**
 * Canonical filter text for the widget portion of the state: element
 * inclusions, exclusions, then range bounds, joined with AND. Elements are
 * rendered alphabetically so equal states always produce equal strings.
 */
export function widgetFilter(state: UiQueryState): string {
  const clauses: string[] = [];
  if (state.include.length > 0) {
    const values = [...state.include].sort().map(renderValue).join(",");
    clauses.push(`elements HAS ALL ${values}`);
  }
  if (state.exclude.length > 0) {
    const values = [...state.exclude].sort().map(renderValue).join(",");
    clauses.push(`NOT elements HAS ANY ${values}`);
  }
  if (state.nelementsMin !== null) {
    clauses.push(`nelements>=${state.nelementsMin}`);
  }
  if (state.nelementsMax !== null) {
    clauses.push(`nelements<=${state.nelementsMax}`);
  }
  if (state.nsitesMin !== null) {
    clauses.push(`nsites>=${state.nsitesMin}`);
  }
  if (state.nsitesMax !== null) {
    clauses.push(`nsites<=${state.nsitesMax}`);
  }
  return clauses.join(" AND ");
}

/** The filter text to send: the manual text if edited, else the widgets'. */
export function effectiveFilter(state: UiQueryState): string {
  return state.manualFilter ? state.filterText : widgetFilter(state);
}

/** Re-derive the textbox content from the widgets unless manually edited. */
export function syncFilterText(state: UiQueryState): UiQueryState {
  if (state.manualFilter) {
    return state;
  }
  return { ...state, filterText: widgetFilter(state) };
}

/** Cycle one element through absent -> included -> excluded -> absent. */
export function toggleElement(state: UiQueryState, symbol: string): UiQueryState {
  const include = new Set(state.include);
  const exclude = new Set(state.exclude);
  if (include.has(symbol)) {
    include.delete(symbol);
    exclude.add(symbol);
  } else if (exclude.has(symbol)) {
    exclude.delete(symbol);
  } else {
    include.add(symbol);
  }
  return syncFilterText({
    ...state,
    include: [...include].sort(),
    exclude: [...exclude].sort(),
    offset: 0,
  });
}

function putList(params: URLSearchParams, key: string, values: string[]): void {
  if (values.length > 0) {
    params.set(key, values.join(","));
  }
}

function putNumber(params: URLSearchParams, key: string, value: number | null): void {
  if (value !== null) {
    params.set(key, String(value));
  }
}

/** Serialize the state into URL query parameters (defaults omitted). */
export function encodeState(state: UiQueryState): string {
  const params = new URLSearchParams();
  if (state.base !== "") {
    params.set("db", state.base);
  }
  putList(params, "include", state.include);
  putList(params, "exclude", state.exclude);
  putNumber(params, "nelmin", state.nelementsMin);
  putNumber(params, "nelmax", state.nelementsMax);
  putNumber(params, "nsmin", state.nsitesMin);
  putNumber(params, "nsmax", state.nsitesMax);
  if (state.manualFilter) {
    params.set("q", state.filterText);
  }
  if (state.offset > 0) {
    params.set("offset", String(state.offset));
  }
  return params.toString();
}

function parseList(raw: string | null): string[] {
  if (raw === null || raw === "") {
    return [];
  }
  return raw
    .split(",")
    .map((item) => item.trim())
    .filter((item) => item !== "")
    .sort();
}

function parseBound(raw: string | null): number | null {
  if (raw === null) {
    return null;
  }
  const value = Number(raw);
  return Number.isFinite(value) ? value : null;
}

/** Rebuild a state from URL query parameters produced by encodeState. */
export function decodeState(query: string): UiQueryState {
  const params = new URLSearchParams(query);
  const manualText = params.get("q");
  const offsetRaw = Number(params.get("offset") ?? "0");
  const state: UiQueryState = {
    base: params.get("db") ?? "",
    include: parseList(params.get("include")),
    exclude: parseList(params.get("exclude")),
    nelementsMin: parseBound(params.get("nelmin")),
    nelementsMax: parseBound(params.get("nelmax")),
    nsitesMin: parseBound(params.get("nsmin")),
    nsitesMax: parseBound(params.get("nsmax")),
    filterText: manualText ?? "",
    manualFilter: manualText !== null,
    offset: Number.isInteger(offsetRaw) && offsetRaw > 0 ? offsetRaw : 0,
  };
  return syncFilterText(state);
}
