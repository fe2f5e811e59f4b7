// Spawns the Python engine service once for the whole test run.

import { spawn, type ChildProcess } from "node:child_process";

const PORT = 7877;
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess | undefined;

async function waitForHealth(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/health`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("demoviz service did not become healthy in time");
}

async function warmWorkers(): Promise<void> {
  // Touch every worker so schema validators are built before tests measure.
  const { Agent, fetch: undiciFetch } = await import("undici");
  const agent = new Agent({ connections: 12 });
  const chart = {
    version: 1,
    datasets: [{ id: "d", fields: [], rows: [{ a: 1, b: 2 }] }],
    views: [{
      id: "v", width: 10, height: 10,
      scales: [
        { id: "sx", channel: "x", kind: "continuous", field: "a", range: [0, 10] },
        { id: "sy", channel: "y", kind: "continuous", field: "b", range: [10, 0] },
      ],
      marks: [{ id: "m", type: "symbol", dataset: "d", encodings: {
        x: { scale: "sx", field: "a" }, y: { scale: "sy", field: "b" } } }],
    }],
  };
  const body = JSON.stringify({
    version: 1, chart,
    interactions: { version: 1, selections: [], applications: [], widgets: [], bindings: [] },
    target: "vega",
  });
  await Promise.all(Array.from({ length: 9 }, () =>
    undiciFetch(`${BASE}/api/compile`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body,
      dispatcher: agent,
    }).then((r) => r.arrayBuffer()),
  ));
  await agent.close();
}

export async function setup(): Promise<void> {
  process.env.DEMOVIZ_SERVICE_URL = BASE;
  proc = spawn(
    "python3",
    ["-m", "demoviz.service", "--port", String(PORT), "--workers", "3"],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  proc.on("exit", (code) => {
    if (code !== null && code !== 0) {
      console.error(`demoviz service exited with code ${code}`);
    }
  });
  await waitForHealth();
  await warmWorkers();
}

export async function teardown(): Promise<void> {
  if (proc && !proc.killed) {
    proc.kill("SIGTERM");
  }
}
