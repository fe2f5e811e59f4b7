import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: "./globalSetup.ts",
    testTimeout: 30000,
    hookTimeout: 60000,
    // The engine service is one shared process; run files serially so
    // timing-sensitive tests (thumbnail latency) are not starved.
    fileParallelism: false,
  },
});
