import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { Agent, fetch as undiciFetch } from "undici";

import type { ChartDoc } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const FIXTURES = join(here, "..", "..", "src", "demoviz", "fixtures");

// Node's built-in fetch funnels same-origin requests through one keep-alive
// connection, which would serialize the service's worker pool. Browsers open
// parallel connections; tests reproduce that with an explicit agent.
const agent = new Agent({ connections: 12, pipelining: 1 });

export const parallelFetch: typeof fetch = ((input: any, init?: any) =>
  undiciFetch(input, { ...init, dispatcher: agent })) as unknown as typeof fetch;

export function serviceUrl(): string {
  const url = process.env.DEMOVIZ_SERVICE_URL;
  if (!url) throw new Error("DEMOVIZ_SERVICE_URL not set (globalSetup failed?)");
  return url;
}

export function fixtureChart(name = "seattle_weather.chart.json"): ChartDoc {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf8")) as ChartDoc;
}

export function appRoot(): HTMLElement {
  document.body.innerHTML = '<div id="approot"></div>';
  return document.getElementById("approot") as HTMLElement;
}
