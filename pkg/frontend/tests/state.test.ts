import { describe, expect, it } from "vitest";

import {
  addBinding,
  applyApplication,
  applySelection,
  closeInspector,
  demonstrationModeActive,
  hasDataBinding,
  initialState,
  openInspector,
} from "../src/state.js";
import type { ApplicationDoc, SelectionDoc } from "../src/types.js";
import { fixtureChart } from "./helpers.js";

const brush: SelectionDoc = {
  id: "brush",
  kind: "interval",
  on: "drag",
  view: "scatter",
  projection: ["x"],
};

const colorApp: ApplicationDoc = {
  id: "brush_color",
  kind: "conditional_encoding",
  channel: "color",
  target: "scatter_points",
  selection: "brush",
};

describe("editor state", () => {
  it("captures demonstrations iff an inspector is open", () => {
    let state = initialState(fixtureChart());
    expect(demonstrationModeActive(state)).toBe(false);
    state = openInspector(state, "interaction_1");
    expect(demonstrationModeActive(state)).toBe(true);
    state = closeInspector(state);
    expect(demonstrationModeActive(state)).toBe(false);
  });

  it("accepting a selection replaces same-id candidates", () => {
    let state = initialState(fixtureChart());
    state = applySelection(state, brush);
    state = applySelection(state, { ...brush, projection: ["x", "y"] });
    expect(state.interactions.selections).toHaveLength(1);
    expect(state.interactions.selections[0].projection).toEqual(["x", "y"]);
  });

  it("accepting an application materializes the default selection", () => {
    let state = initialState(fixtureChart());
    state = applyApplication(state, colorApp, brush);
    expect(state.interactions.selections.map((s) => s.id)).toEqual(["brush"]);
    expect(state.interactions.applications.map((a) => a.id)).toEqual(["brush_color"]);
  });

  it("rejects applications whose selection cannot be materialized", () => {
    const state = initialState(fixtureChart());
    expect(() => applyApplication(state, colorApp, null)).toThrow(/missing selection/);
  });

  it("bindings replace earlier bindings on the same mark property", () => {
    let state = initialState(fixtureChart());
    state = addBinding(state, { signal: "brush_x_start", mark: "m", property: "x" });
    state = addBinding(state, { signal: "brush_x_end", mark: "m", property: "x" });
    expect(state.interactions.bindings).toHaveLength(1);
    expect(state.interactions.bindings[0].signal).toBe("brush_x_end");
  });

  it("widget dropzone gate: only charts with data bindings qualify", () => {
    expect(hasDataBinding(fixtureChart())).toBe(true);
    const bare = fixtureChart();
    bare.views = bare.views.map((v) => ({
      ...v,
      marks: v.marks.map((m) => ({ ...m, encodings: {} })),
    }));
    expect(hasDataBinding(bare)).toBe(false);
  });
});
