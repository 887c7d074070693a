import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // The integration suite boots the real Python service as a child
    // process, which needs generous timeouts on cold starts.
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
