// Implicit demonstration mode: with no inspector open, no /api/suggest
// request is ever issued (asserted against the client's request log).

import { describe, expect, it } from "vitest";

import { App } from "../src/app.js";
import { appRoot, fixtureChart, parallelFetch, serviceUrl } from "./helpers.js";

function scriptedDrag(app: App): void {
  app.simulatePointer("down", 100, 150, 0);
  app.simulatePointer("move", 150, 152, 80);
  app.simulatePointer("up", 200, 155, 160);
}

describe("implicit demonstration mode", () => {
  it("issues no suggest calls without an open inspector", async () => {
    const app = new App({
      root: appRoot(),
      chart: fixtureChart(),
      serviceUrl: serviceUrl(),
      fetchImpl: parallelFetch,
      renderer: "none",
    });
    await app.start();
    scriptedDrag(app);
    app.flushPendingClicks();
    await app.suggestionsRendered;
    expect(app.client.suggestCallCount()).toBe(0);

    app.addInteraction();
    scriptedDrag(app);
    await app.suggestionsRendered;
    expect(app.client.suggestCallCount()).toBe(1);

    app.closeInspector();
    scriptedDrag(app);
    await app.suggestionsRendered;
    expect(app.client.suggestCallCount()).toBe(1);
  });

  it("clicks pass through to the visualization when no inspector is open", async () => {
    const app = new App({
      root: appRoot(),
      chart: fixtureChart(),
      serviceUrl: serviceUrl(),
      fetchImpl: parallelFetch,
      renderer: "none",
    });
    await app.start();
    app.simulatePointer("down", 100, 100, 0);
    app.simulatePointer("up", 100, 100, 30);
    app.flushPendingClicks();
    await app.suggestionsRendered;
    expect(app.client.suggestCallCount()).toBe(0);
    expect(app.state.lastSuggestions).toBeNull();
  });

  it("DOM pointer events reach the recorder through the canvas element", async () => {
    const root = appRoot();
    const app = new App({
      root,
      chart: fixtureChart(),
      serviceUrl: serviceUrl(),
      fetchImpl: parallelFetch,
      renderer: "none",
    });
    await app.start();
    app.addInteraction();
    const canvas = root.querySelector("#canvas") as HTMLElement;
    const fire = (type: string, x: number, y: number) =>
      canvas.dispatchEvent(new MouseEvent(type, { clientX: x, clientY: y, bubbles: true }));
    fire("pointerdown", 100, 150);
    fire("pointermove", 160, 152);
    fire("pointerup", 220, 155);
    await app.suggestionsRendered;
    expect(app.client.suggestCallCount()).toBe(1);
    expect(app.state.lastSuggestions?.selections[0].kind).toBe("interval");
  });

  it("surfaces suggest failures as inline inspector messages", async () => {
    // A view whose only mark is an unselectable bare text: no valid selection.
    const chart = {
      version: 1 as const,
      datasets: [{ id: "d", fields: [], rows: [{ a: 1 }] }],
      views: [{
        id: "v", width: 300, height: 200, scales: [],
        marks: [],
      }],
    };
    const app = new App({
      root: appRoot(),
      chart,
      serviceUrl: serviceUrl(),
      fetchImpl: parallelFetch,
      renderer: "none",
    });
    await app.start();
    app.addInteraction();
    await app.handleTrace([
      { kind: "pointerdown", x: 10, y: 10, t: 0, viewId: "v" },
      { kind: "pointerup", x: 120, y: 14, t: 100, viewId: "v" },
    ]);
    const message = document.querySelector("#messages")?.textContent ?? "";
    expect(message).toContain("NoValidSelection");
    expect(app.state.lastSuggestions).toBeNull();
  });

  it("a newer demonstration cancels the pending one", async () => {
    const app = new App({
      root: appRoot(),
      chart: fixtureChart(),
      serviceUrl: serviceUrl(),
      fetchImpl: parallelFetch,
      renderer: "none",
    });
    await app.start();
    app.addInteraction();
    const first = app.handleTrace([
      { kind: "pointerdown", x: 10, y: 150, t: 0, viewId: "scatter" },
      { kind: "pointerup", x: 150, y: 152, t: 100, viewId: "scatter" },
    ]);
    const second = app.handleTrace([
      { kind: "click", x: 120, y: 170, t: 0, viewId: "hist" },
    ]);
    await Promise.all([first, second]);
    // The click demonstration (point suggestions) wins.
    expect(app.state.lastSuggestions?.selections[0].kind).toBe("point");
  });
});
