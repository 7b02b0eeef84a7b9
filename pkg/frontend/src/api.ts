/**
 * Thin client over the archive server's HTTP interface. All requests are
 * GETs; all counts shown in the UI come from the response `meta` fields,
 * never from client-side recounting.
 */

import { effectiveFilter, type UiQueryState } from "./state.js";

export interface DatabaseLink {
  slug: string;
  description: string;
  baseUrl: string;
}

export interface StructureAttributes {
  chemical_formula_reduced?: string;
  chemical_formula_descriptive?: string;
  elements?: string[];
  nelements?: number;
  nsites?: number;
  lattice_vectors?: number[][] | null;
  cartesian_site_positions?: number[][];
  species_at_sites?: string[];
  species?: { name: string; chemical_symbols: string[]; concentration: number[] }[];
  [key: string]: unknown;
}

export interface ResultRow {
  id: string;
  formula: string;
  nelements: number | null;
  nsites: number | null;
  /** Database-specific (underscore-prefixed) attribute values. */
  custom: Record<string, unknown>;
}

export interface ResultPage {
  rows: ResultRow[];
  returned: number;
  available: number;
  more: boolean;
  next: string | null;
}

export interface EntryDetail {
  id: string;
  attributes: StructureAttributes;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

const ACCEPT = { Accept: "application/vnd.api+json" };

function stripTrailingSlash(url: string): string {
  return url.endsWith("/") ? url.slice(0, -1) : url;
}

async function errorFrom(response: Response): Promise<ApiError> {
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { errors?: { detail?: string }[] };
    const first = body.errors?.[0];
    if (first?.detail) {
      detail = first.detail;
    }
  } catch {
    // Non-JSON error body; keep the generic detail.
  }
  return new ApiError(response.status, detail);
}

/** List the databases mounted under one root URL via its links index. */
export async function discoverDatabases(
  rootUrl: string,
  fetchImpl: FetchLike = fetch,
): Promise<DatabaseLink[]> {
  const response = await fetchImpl(`${stripTrailingSlash(rootUrl)}/v1/links`, {
    headers: ACCEPT,
  });
  if (!response.ok) {
    throw await errorFrom(response);
  }
  const body = (await response.json()) as {
    data: { id: string; attributes?: { description?: string; base_url?: string } }[];
  };
  return body.data.map((item) => ({
    slug: item.id,
    description: item.attributes?.description ?? "",
    baseUrl: item.attributes?.base_url ?? "",
  }));
}

/** The structures URL a given state queries, including paging parameters. */
export function structuresUrl(state: UiQueryState, limit: number): string {
  const params = new URLSearchParams();
  const filter = effectiveFilter(state);
  if (filter !== "") {
    params.set("filter", filter);
  }
  if (state.offset > 0) {
    params.set("page_offset", String(state.offset));
  }
  params.set("page_limit", String(limit));
  return `${stripTrailingSlash(state.base)}/v1/structures?${params.toString()}`;
}

function toRow(item: { id: string; attributes?: StructureAttributes }): ResultRow {
  const attributes = item.attributes ?? {};
  const custom: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(attributes)) {
    if (key.startsWith("_")) {
      custom[key] = value;
    }
  }
  return {
    id: item.id,
    formula: attributes.chemical_formula_reduced ?? "",
    nelements: attributes.nelements ?? null,
    nsites: attributes.nsites ?? null,
    custom,
  };
}

interface Envelope {
  data: { id: string; attributes?: StructureAttributes }[];
  meta: {
    data_returned: number;
    data_available: number;
    more_data_available: boolean;
  };
  links?: { next?: string | null };
}

/** Fetch one page of results for the state's database and filter. */
export async function fetchPage(
  state: UiQueryState,
  limit: number,
  fetchImpl: FetchLike = fetch,
  signal?: AbortSignal,
): Promise<ResultPage> {
  const response = await fetchImpl(structuresUrl(state, limit), {
    headers: ACCEPT,
    signal,
  });
  if (!response.ok) {
    throw await errorFrom(response);
  }
  const body = (await response.json()) as Envelope;
  return {
    rows: body.data.map(toRow),
    returned: body.meta.data_returned,
    available: body.meta.data_available,
    more: body.meta.more_data_available,
    next: body.links?.next ?? null,
  };
}

/** Fetch one entry with its full attribute set. */
export async function fetchEntry(
  base: string,
  id: string,
  fetchImpl: FetchLike = fetch,
): Promise<EntryDetail> {
  const encoded = id.split("/").map(encodeURIComponent).join("/");
  const response = await fetchImpl(
    `${stripTrailingSlash(base)}/v1/structures/${encoded}`,
    { headers: ACCEPT },
  );
  if (!response.ok) {
    throw await errorFrom(response);
  }
  const body = (await response.json()) as {
    data: { id: string; attributes?: StructureAttributes };
  };
  return { id: body.data.id, attributes: body.data.attributes ?? {} };
}
