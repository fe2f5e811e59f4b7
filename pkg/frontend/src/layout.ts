// Mirror of the engine's view layout: views stack vertically at x = 0 with
// a fixed gap, so canvas coordinates can be mapped back to view-local ones.

import type { ChartDoc, ViewDoc } from "./types.js";

export const VIEW_GAP = 60;

export interface ViewRegion {
  view: ViewDoc;
  ox: number;
  oy: number;
}

export function viewRegions(chart: ChartDoc): ViewRegion[] {
  const regions: ViewRegion[] = [];
  let oy = 0;
  for (const view of chart.views) {
    regions.push({ view, ox: 0, oy });
    oy += view.height + VIEW_GAP;
  }
  return regions;
}

/** The view containing a root-relative point, if any. */
export function viewAt(chart: ChartDoc, x: number, y: number): ViewRegion | null {
  for (const region of viewRegions(chart)) {
    if (
      x >= region.ox &&
      x <= region.ox + region.view.width &&
      y >= region.oy &&
      y <= region.oy + region.view.height
    ) {
      return region;
    }
  }
  return null;
}
