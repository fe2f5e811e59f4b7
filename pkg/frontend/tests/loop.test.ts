// The demonstration loop on the Seattle fixture, against the live service:
// scripted drag -> thumbnails within 500 ms of pointer-up; accepting the
// x-brush + filter yields a live, brushable canvas; Export downloads bytes
// identical to the service compile response.

import { describe, expect, it } from "vitest";

import { App } from "../src/app.js";
import { appRoot, fixtureChart, parallelFetch, serviceUrl } from "./helpers.js";

async function startApp(renderer: "svg" | "none" = "none"): Promise<App> {
  const app = new App({
    root: appRoot(),
    chart: fixtureChart(),
    serviceUrl: serviceUrl(),
    fetchImpl: parallelFetch,
    renderer,
  });
  await app.start();
  return app;
}

describe("demonstration loop", () => {
  it("renders suggestion thumbnails within 500 ms of pointer-up", async () => {
    const app = await startApp();
    app.addInteraction();

    app.simulatePointer("down", 100, 150, 0);
    app.simulatePointer("move", 150, 152, 80);
    const t0 = performance.now();
    app.simulatePointer("up", 200, 155, 160);
    await app.suggestionsRendered;
    const elapsed = performance.now() - t0;

    const selThumbs = document.querySelectorAll("#selection-thumbs .thumb");
    const appThumbs = document.querySelectorAll("#application-thumbs .thumb");
    expect(selThumbs.length).toBe(3); // 2D, x, y brushes
    expect(appThumbs.length).toBeGreaterThanOrEqual(4);
    // Previews actually rendered (SVG content, not placeholders).
    const ready = document.querySelectorAll("#selection-thumbs .thumb-picture.ready");
    expect(ready.length).toBe(3);
    expect((selThumbs[0].textContent ?? "")).toContain("brush x (default)");
    expect(elapsed).toBeLessThan(500);
  }, 20000);

  it("accepting the x-brush + filter yields a live, brushable canvas", async () => {
    const app = await startApp();
    app.addInteraction();
    app.simulatePointer("down", 100, 150, 0);
    app.simulatePointer("up", 200, 155, 160);
    await app.suggestionsRendered;

    const suggestions = app.state.lastSuggestions;
    expect(suggestions).not.toBeNull();
    // Default selection is the x-constrained brush.
    expect(suggestions!.selections[suggestions!.defaultSelection].projection)
      .toEqual(["x"]);

    await app.acceptSelection(suggestions!.defaultSelection);
    const colorIdx = suggestions!.applications.findIndex(
      (a) => a.kind === "conditional_encoding" && a.channel === "color"
        && a.target === "scatter_points");
    const filterIdx = suggestions!.applications.findIndex(
      (a) => a.kind === "filter" && a.target === "hist");
    expect(colorIdx).toBeGreaterThanOrEqual(0);
    expect(filterIdx).toBeGreaterThanOrEqual(0);
    await app.acceptApplication(colorIdx);
    await app.acceptApplication(filterIdx);

    // The canvas is immediately live: drive the brush through its signals
    // and watch the histogram re-aggregate.
    const view = app.liveView!;
    const before = (view.data("hist_bars_data") as { count: number }[])
      .reduce((acc, d) => acc + d.count, 0);
    view.signal("brush_x_start", 100);
    view.signal("brush_x_end", 200);
    await view.runAsync();
    const after = (view.data("hist_bars_data") as { count: number }[])
      .reduce((acc, d) => acc + d.count, 0);
    expect(before).toBe(120);
    expect(after).toBeGreaterThan(0);
    expect(after).toBeLessThan(before);
  }, 20000);

  it("export downloads bytes identical to the service compile response", async () => {
    const app = await startApp();
    app.addInteraction();
    app.simulatePointer("down", 100, 150, 0);
    app.simulatePointer("up", 200, 155, 160);
    await app.suggestionsRendered;
    const suggestions = app.state.lastSuggestions!;
    await app.acceptSelection(suggestions.defaultSelection);
    const filterIdx = suggestions.applications.findIndex((a) => a.kind === "filter");
    await app.acceptApplication(filterIdx);

    const exported = await app.exportDocument();
    const resp = await fetch(`${serviceUrl()}/api/compile`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        version: 1,
        chart: app.state.chart,
        interactions: app.state.interactions,
        target: "vega",
        format: "document",
      }),
    });
    const expected = new Uint8Array(await resp.arrayBuffer());
    expect(exported.length).toBe(expected.length);
    expect(Buffer.from(exported).equals(Buffer.from(expected))).toBe(true);
    // And it is a standalone Vega document.
    const doc = JSON.parse(Buffer.from(exported).toString("utf8"));
    expect(doc.$schema).toContain("vega/v5");
  }, 20000);

  it("renders the live canvas into the DOM with the SVG renderer", async () => {
    const app = await startApp("svg");
    const svg = document.querySelector("#canvas svg");
    expect(svg).not.toBeNull();
    expect(app.liveView).not.toBeNull();
  }, 20000);

  it("clicking a thumbnail applies the candidate to the editor state", async () => {
    const app = await startApp();
    app.addInteraction();
    app.simulatePointer("down", 100, 150, 0);
    app.simulatePointer("up", 200, 155, 160);
    await app.suggestionsRendered;
    expect(app.state.interactions.selections).toHaveLength(0);

    const thumbs = document.querySelectorAll("#selection-thumbs .thumb");
    (thumbs[1] as HTMLElement).click(); // the 2D-brush candidate
    await new Promise((r) => setTimeout(r, 400)); // re-embed round trip
    expect(app.state.interactions.selections).toHaveLength(1);
    expect(app.state.interactions.selections[0].projection).toEqual(["x", "y"]);
  }, 20000);
});
