import { describe, expect, it } from "vitest";

import { projectScene } from "../src/geometry.js";

const CUBE = [
  [1.0, 0.0, 0.0],
  [0.0, 1.0, 0.0],
  [0.0, 0.0, 1.0],
];

describe("cell projection", () => {
  it("projects a cube into 12 edges that fit the canvas", () => {
    const scene = projectScene(CUBE, [[0.5, 0.5, 0.5]], ["Na"], 400, 300);
    expect(scene.edges).toHaveLength(12);
    expect(scene.sites).toHaveLength(1);
    for (const edge of scene.edges) {
      for (const value of [edge.x1, edge.x2]) {
        expect(value).toBeGreaterThanOrEqual(0);
        expect(value).toBeLessThanOrEqual(400);
      }
      for (const value of [edge.y1, edge.y2]) {
        expect(value).toBeGreaterThanOrEqual(0);
        expect(value).toBeLessThanOrEqual(300);
      }
    }
  });

  it("is deterministic", () => {
    const first = projectScene(CUBE, [[0.1, 0.2, 0.3]], ["O"], 200, 200);
    const second = projectScene(CUBE, [[0.1, 0.2, 0.3]], ["O"], 200, 200);
    expect(second).toEqual(first);
  });

  it("draws molecules without any cell edges", () => {
    const scene = projectScene(
      null,
      [
        [0.0, 0.0, 0.0],
        [0.96, 0.0, 0.0],
      ],
      ["O", "H"],
      300,
      300,
    );
    expect(scene.edges).toHaveLength(0);
    expect(scene.sites).toHaveLength(2);
  });

  it("orders sites far to near for painter-style drawing", () => {
    const scene = projectScene(
      null,
      [
        [0.0, 0.0, 5.0],
        [0.0, 0.0, -5.0],
      ],
      ["A", "B"],
      300,
      300,
    );
    expect(scene.sites[0].depth).toBeLessThanOrEqual(scene.sites[1].depth);
  });

  it("handles an empty scene", () => {
    expect(projectScene(null, [], [], 100, 100)).toEqual({ edges: [], sites: [] });
  });
});
