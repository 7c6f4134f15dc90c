/// <reference types="vitest/config" />
import { defineConfig } from "vite";

export default defineConfig({
  server: {
    // the dev server talks to a locally running `cofact serve`
    proxy: {
      "/sessions": "http://127.0.0.1:8080",
      "/fixtures": "http://127.0.0.1:8080",
    },
  },
  test: {
    environment: "happy-dom",
  },
});
