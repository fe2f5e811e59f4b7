// Browser bootstrap: load a chart (demo file or user upload) and start the app.

import { App } from "./app.js";
import type { ChartDoc } from "./types.js";

const SERVICE_URL = new URLSearchParams(location.search).get("service")
  ?? "http://127.0.0.1:7878";

async function boot(chart: ChartDoc): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new App({ root, chart, serviceUrl: SERVICE_URL });
  await app.start();
  (window as unknown as { demoviz: App }).demoviz = app;
}

function wireChartLoading(): void {
  const demoButton = document.getElementById("load-demo");
  demoButton?.addEventListener("click", async () => {
    const resp = await fetch("./seattle_weather.chart.json");
    await boot((await resp.json()) as ChartDoc);
  });
  const input = document.getElementById("chart-file") as HTMLInputElement | null;
  input?.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    await boot(JSON.parse(await file.text()) as ChartDoc);
  });
}

wireChartLoading();
