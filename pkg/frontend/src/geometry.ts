/**
 * Projection of a unit cell and its sites onto a 2D canvas: a fixed
 * rotation followed by an orthographic projection, scaled to fit. Pure
 * functions so the drawing math is testable without a DOM.
 */

export interface ProjectedSite {
  x: number;
  y: number;
  /** Depth after rotation; draw far-to-near for a simple painter's order. */
  depth: number;
  symbol: string;
}

export interface Scene2D {
  edges: { x1: number; y1: number; x2: number; y2: number }[];
  sites: ProjectedSite[];
}

const YAW = 0.55;
const PITCH = -0.42;
const MARGIN = 0.12;

function rotate(p: number[]): [number, number, number] {
  const [x, y, z] = p;
  // Yaw about the vertical axis, then pitch about the horizontal axis.
  const x1 = x * Math.cos(YAW) + z * Math.sin(YAW);
  const z1 = -x * Math.sin(YAW) + z * Math.cos(YAW);
  const y2 = y * Math.cos(PITCH) - z1 * Math.sin(PITCH);
  const z2 = y * Math.sin(PITCH) + z1 * Math.cos(PITCH);
  return [x1, y2, z2];
}

function cellCorners(lattice: number[][]): number[][] {
  const corners: number[][] = [];
  for (const i of [0, 1]) {
    for (const j of [0, 1]) {
      for (const k of [0, 1]) {
        corners.push([
          i * lattice[0][0] + j * lattice[1][0] + k * lattice[2][0],
          i * lattice[0][1] + j * lattice[1][1] + k * lattice[2][1],
          i * lattice[0][2] + j * lattice[1][2] + k * lattice[2][2],
        ]);
      }
    }
  }
  return corners;
}

/** Pairs of corner indices that differ in exactly one (i, j, k) bit. */
function cellEdgePairs(): [number, number][] {
  const pairs: [number, number][] = [];
  for (let a = 0; a < 8; a += 1) {
    for (const bit of [1, 2, 4]) {
      const b = a ^ bit;
      if (a < b) {
        pairs.push([a, b]);
      }
    }
  }
  return pairs;
}

/**
 * Project the cell (if any) and the sites into canvas coordinates. The
 * scene is centred and uniformly scaled so everything fits inside the
 * given width and height with a small margin.
 */
export function projectScene(
  lattice: number[][] | null,
  positions: number[][],
  symbols: string[],
  width: number,
  height: number,
): Scene2D {
  const rotatedSites = positions.map(rotate);
  const rotatedCorners = lattice === null ? [] : cellCorners(lattice).map(rotate);
  const everything = [...rotatedSites, ...rotatedCorners];
  if (everything.length === 0) {
    return { edges: [], sites: [] };
  }

  const xs = everything.map((p) => p[0]);
  const ys = everything.map((p) => p[1]);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX;
  const spanY = maxY - minY;
  const usableW = width * (1 - 2 * MARGIN);
  const usableH = height * (1 - 2 * MARGIN);
  const span = Math.max(spanX, spanY);
  const scale = span > 1e-12 ? Math.min(usableW / span, usableH / span) : 1;

  const toCanvas = (p: [number, number, number]) => ({
    x: width / 2 + (p[0] - (minX + maxX) / 2) * scale,
    // Canvas y grows downward; flip so "up" in space is up on screen.
    y: height / 2 - (p[1] - (minY + maxY) / 2) * scale,
    depth: p[2],
  });

  const corners2d = rotatedCorners.map(toCanvas);
  const edges = lattice === null
    ? []
    : cellEdgePairs().map(([a, b]) => ({
        x1: corners2d[a].x,
        y1: corners2d[a].y,
        x2: corners2d[b].x,
        y2: corners2d[b].y,
      }));

  const sites = rotatedSites
    .map((p, index) => ({ ...toCanvas(p), symbol: symbols[index] ?? "?" }))
    .sort((lhs, rhs) => lhs.depth - rhs.depth);

  return { edges, sites };
}
