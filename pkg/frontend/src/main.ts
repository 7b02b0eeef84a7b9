/**
 * Wires the explorer together: database discovery, the periodic-table and
 * range widgets, the filter textbox, the paged results table, and the entry
 * detail view with its cell drawing and downloads. Query state lives in the
 * page URL so any view is shareable.
 */

import {
  ApiError,
  discoverDatabases,
  fetchEntry,
  fetchPage,
  type DatabaseLink,
  type EntryDetail,
  type ResultPage,
} from "./api.js";
import { ELEMENT_CELLS } from "./elements.js";
import { toCif, toXyz, siteSymbols } from "./export.js";
import { FilterSyntaxError, parseFilter } from "./filter.js";
import { projectScene } from "./geometry.js";
import {
  decodeState,
  emptyState,
  encodeState,
  syncFilterText,
  toggleElement,
  widgetFilter,
  type UiQueryState,
} from "./state.js";

const PAGE_LIMIT = 20;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

let state: UiQueryState = emptyState();
let inFlight: AbortController | null = null;

const banner = el<HTMLDivElement>("banner");
const rootInput = el<HTMLInputElement>("root-url");
const discoverButton = el<HTMLButtonElement>("discover");
const databaseSelect = el<HTMLSelectElement>("database");
const customBaseInput = el<HTMLInputElement>("custom-base");
const periodicTable = el<HTMLDivElement>("periodic-table");
const nelMin = el<HTMLInputElement>("nel-min");
const nelMax = el<HTMLInputElement>("nel-max");
const nsMin = el<HTMLInputElement>("ns-min");
const nsMax = el<HTMLInputElement>("ns-max");
const filterBox = el<HTMLInputElement>("filter-text");
const filterFeedback = el<HTMLSpanElement>("filter-feedback");
const resetFilter = el<HTMLButtonElement>("reset-filter");
const searchButton = el<HTMLButtonElement>("search");
const countsLine = el<HTMLDivElement>("counts");
const resultsBody = el<HTMLTableSectionElement>("results-body");
const resultsHead = el<HTMLTableRowElement>("results-head");
const prevButton = el<HTMLButtonElement>("prev-page");
const nextButton = el<HTMLButtonElement>("next-page");
const detailPane = el<HTMLDivElement>("detail");
const detailTitle = el<HTMLHeadingElement>("detail-title");
const detailTable = el<HTMLTableElement>("detail-attributes");
const canvas = el<HTMLCanvasElement>("cell-canvas");
const downloadXyz = el<HTMLButtonElement>("download-xyz");
const downloadCif = el<HTMLButtonElement>("download-cif");

let currentDetail: EntryDetail | null = null;

function showBanner(message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

function clearBanner(): void {
  banner.hidden = true;
}

function pushUrl(): void {
  const query = encodeState(state);
  history.replaceState(null, "", query === "" ? location.pathname : `?${query}`);
}

function setState(next: UiQueryState): void {
  state = syncFilterText(next);
  pushUrl();
  renderWidgets();
}

function renderWidgets(): void {
  customBaseInput.value = state.base;
  for (const option of Array.from(databaseSelect.options)) {
    option.selected = option.value === state.base;
  }
  nelMin.value = state.nelementsMin === null ? "" : String(state.nelementsMin);
  nelMax.value = state.nelementsMax === null ? "" : String(state.nelementsMax);
  nsMin.value = state.nsitesMin === null ? "" : String(state.nsitesMin);
  nsMax.value = state.nsitesMax === null ? "" : String(state.nsitesMax);
  filterBox.value = state.filterText;
  resetFilter.hidden = !state.manualFilter;
  validateFilterBox();
  for (const button of periodicTable.querySelectorAll<HTMLButtonElement>("button")) {
    const symbol = button.dataset.symbol ?? "";
    button.classList.toggle("included", state.include.includes(symbol));
    button.classList.toggle("excluded", state.exclude.includes(symbol));
  }
}

function validateFilterBox(): boolean {
  if (state.filterText.trim() === "") {
    filterFeedback.textContent = "";
    return true;
  }
  try {
    parseFilter(state.filterText);
    filterFeedback.textContent = "";
    return true;
  } catch (error) {
    filterFeedback.textContent =
      error instanceof FilterSyntaxError ? error.message : String(error);
    return false;
  }
}

function buildPeriodicTable(): void {
  for (const cell of ELEMENT_CELLS) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = cell.symbol;
    button.dataset.symbol = cell.symbol;
    button.style.gridRow = String(cell.row);
    button.style.gridColumn = String(cell.column);
    button.addEventListener("click", () => {
      setState(toggleElement(state, cell.symbol));
      void runQuery();
    });
    periodicTable.append(button);
  }
}

function renderDatabases(links: DatabaseLink[]): void {
  databaseSelect.replaceChildren();
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = links.length === 0 ? "(no databases)" : "(choose)";
  databaseSelect.append(placeholder);
  for (const link of links) {
    const option = document.createElement("option");
    option.value = link.baseUrl;
    option.textContent = `${link.slug} — ${link.description}`;
    databaseSelect.append(option);
  }
  renderWidgets();
}

async function discover(): Promise<void> {
  clearBanner();
  try {
    const links = await discoverDatabases(rootInput.value);
    renderDatabases(links);
  } catch (error) {
    renderDatabases([]);
    showBanner(`could not list databases: ${String(error)}`);
  }
}

function renderPage(page: ResultPage): void {
  const customColumns = [
    ...new Set(page.rows.flatMap((row) => Object.keys(row.custom))),
  ].sort();
  resultsHead.replaceChildren();
  for (const title of ["id", "formula", "nelements", "nsites", ...customColumns]) {
    const th = document.createElement("th");
    th.textContent = title;
    resultsHead.append(th);
  }
  resultsBody.replaceChildren();
  for (const row of page.rows) {
    const tr = document.createElement("tr");
    const cells = [
      row.id,
      row.formula,
      row.nelements === null ? "" : String(row.nelements),
      row.nsites === null ? "" : String(row.nsites),
      ...customColumns.map((key) =>
        row.custom[key] === undefined ? "" : String(row.custom[key]),
      ),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.append(td);
    }
    tr.addEventListener("click", () => void openDetail(row.id));
    resultsBody.append(tr);
  }
  countsLine.textContent =
    `showing ${page.returned} of ${page.available} entries` +
    (page.more ? " (more available)" : "");
  prevButton.disabled = state.offset === 0;
  nextButton.disabled = !page.more;
}

async function runQuery(): Promise<void> {
  if (state.base === "") {
    return;
  }
  if (!validateFilterBox()) {
    return; // Invalid manual filter text: flagged inline, nothing sent.
  }
  clearBanner();
  inFlight?.abort();
  const controller = new AbortController();
  inFlight = controller;
  try {
    const page = await fetchPage(state, PAGE_LIMIT, fetch, controller.signal);
    if (!controller.signal.aborted) {
      renderPage(page);
    }
  } catch (error) {
    if (controller.signal.aborted) {
      return;
    }
    showBanner(
      error instanceof ApiError
        ? `server rejected the query: ${error.detail}`
        : `request failed: ${String(error)}`,
    );
  }
}

function drawDetail(detail: EntryDetail): void {
  const context = canvas.getContext("2d");
  if (context === null) {
    return;
  }
  context.clearRect(0, 0, canvas.width, canvas.height);
  const scene = projectScene(
    detail.attributes.lattice_vectors ?? null,
    detail.attributes.cartesian_site_positions ?? [],
    siteSymbols(detail.attributes),
    canvas.width,
    canvas.height,
  );
  context.strokeStyle = "#8aa";
  for (const edge of scene.edges) {
    context.beginPath();
    context.moveTo(edge.x1, edge.y1);
    context.lineTo(edge.x2, edge.y2);
    context.stroke();
  }
  context.font = "10px sans-serif";
  for (const site of scene.sites) {
    context.beginPath();
    context.arc(site.x, site.y, 7, 0, 2 * Math.PI);
    context.fillStyle = "#3b6ea5";
    context.fill();
    context.fillStyle = "#fff";
    context.fillText(site.symbol, site.x - 6, site.y + 3);
  }
}

async function openDetail(id: string): Promise<void> {
  try {
    const detail = await fetchEntry(state.base, id);
    currentDetail = detail;
    detailPane.hidden = false;
    detailTitle.textContent = id;
    detailTable.replaceChildren();
    for (const [key, value] of Object.entries(detail.attributes)) {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = key;
      const td = document.createElement("td");
      td.textContent = JSON.stringify(value);
      tr.append(th, td);
      detailTable.append(tr);
    }
    downloadCif.disabled = !detail.attributes.lattice_vectors;
    drawDetail(detail);
  } catch (error) {
    showBanner(`could not load entry ${id}: ${String(error)}`);
  }
}

function offerDownload(filename: string, text: string): void {
  const url = URL.createObjectURL(new Blob([text], { type: "text/plain" }));
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

function safeName(id: string, extension: string): string {
  return `${id.replace(/[^A-Za-z0-9_-]/g, "_")}.${extension}`;
}

function bindEvents(): void {
  discoverButton.addEventListener("click", () => void discover());
  databaseSelect.addEventListener("change", () => {
    setState({ ...state, base: databaseSelect.value, offset: 0 });
    void runQuery();
  });
  customBaseInput.addEventListener("change", () => {
    setState({ ...state, base: customBaseInput.value.trim(), offset: 0 });
    void runQuery();
  });

  const bindBound = (
    input: HTMLInputElement,
    key: "nelementsMin" | "nelementsMax" | "nsitesMin" | "nsitesMax",
  ) => {
    input.addEventListener("change", () => {
      const value = input.value === "" ? null : Number(input.value);
      setState({
        ...state,
        [key]: value !== null && Number.isFinite(value) ? value : null,
        offset: 0,
      });
      void runQuery();
    });
  };
  bindBound(nelMin, "nelementsMin");
  bindBound(nelMax, "nelementsMax");
  bindBound(nsMin, "nsitesMin");
  bindBound(nsMax, "nsitesMax");

  filterBox.addEventListener("input", () => {
    state = { ...state, filterText: filterBox.value, manualFilter: true, offset: 0 };
    pushUrl();
    resetFilter.hidden = false;
    validateFilterBox();
  });
  filterBox.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      void runQuery();
    }
  });
  resetFilter.addEventListener("click", () => {
    setState({
      ...state,
      manualFilter: false,
      filterText: widgetFilter(state),
      offset: 0,
    });
    void runQuery();
  });
  searchButton.addEventListener("click", () => void runQuery());

  prevButton.addEventListener("click", () => {
    setState({ ...state, offset: Math.max(0, state.offset - PAGE_LIMIT) });
    void runQuery();
  });
  nextButton.addEventListener("click", () => {
    setState({ ...state, offset: state.offset + PAGE_LIMIT });
    void runQuery();
  });

  downloadXyz.addEventListener("click", () => {
    if (currentDetail !== null) {
      offerDownload(
        safeName(currentDetail.id, "xyz"),
        toXyz(currentDetail.id, currentDetail.attributes),
      );
    }
  });
  downloadCif.addEventListener("click", () => {
    if (currentDetail !== null) {
      offerDownload(
        safeName(currentDetail.id, "cif"),
        toCif(currentDetail.id, currentDetail.attributes),
      );
    }
  });
}

function start(): void {
  buildPeriodicTable();
  bindEvents();
  state = syncFilterText(decodeState(location.search));
  renderWidgets();
  if (state.base !== "") {
    void runQuery();
  }
}

start();
