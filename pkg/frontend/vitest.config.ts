import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The integration suite spawns a real API server process.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
