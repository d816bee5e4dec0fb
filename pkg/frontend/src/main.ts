/** Page bootstrap: ?api=<base> overrides the service origin, ?session=<id>
 * re-attaches to an existing session. */

import { createApp } from "./app.js";

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? window.location.origin;
  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app mount point");
  const app = createApp(root, base);
  const sessionId = params.get("session");
  if (sessionId !== null) void app.attachSession(sessionId);
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
