import { defineConfig } from "vitest/config";

export default defineConfig({
  resolve: {
    // Sources use NodeNext-style ".js" specifiers; map them back to the
    // TypeScript files for the test runner.
    alias: [{ find: /^(\.{1,2}\/.*)\.js$/, replacement: "$1" }],
  },
  test: {
    include: ["test/**/*.test.ts"],
    environment: "node",
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
