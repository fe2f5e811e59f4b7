// Static preview thumbnails: each candidate is applied to the chart alone,
// compiled through the service, and rendered small with the embedded Vega
// runtime. Thumbnails compile against a row-sampled copy of the chart so a
// grid of previews stays fast; the applied design always uses full data.

import * as vega from "vega";

import type { ServiceClient } from "./api.js";
import type {
  ApplicationDoc,
  ChartDoc,
  InteractionsDoc,
  SelectionDoc,
  SuggestionSetDoc,
} from "./types.js";
import { emptyInteractions } from "./types.js";

export const THUMBNAIL_MAX_ROWS = 20;
export const THUMBNAIL_SCALE = 0.22;

export function sampleChart(chart: ChartDoc, maxRows = THUMBNAIL_MAX_ROWS): ChartDoc {
  return {
    ...chart,
    datasets: chart.datasets.map((ds) => {
      const rows = ds.rows ?? [];
      if (rows.length <= maxRows) return ds;
      const step = Math.ceil(rows.length / maxRows);
      return { ...ds, rows: rows.filter((_, i) => i % step === 0) };
    }),
  };
}

export function selectionCandidateDoc(selection: SelectionDoc): InteractionsDoc {
  return { ...emptyInteractions(), selections: [selection] };
}

export function applicationCandidateDoc(
  application: ApplicationDoc,
  suggestions: SuggestionSetDoc,
): InteractionsDoc {
  const selection = suggestions.selections[suggestions.defaultSelection];
  return {
    ...emptyInteractions(),
    selections: [selection],
    applications: [application],
  };
}

export interface ThumbnailResult {
  ok: boolean;
  svg: string | null;
}

/** Previews show marks and selection chrome only; axes and legends cost
 *  text layout and add nothing at thumbnail scale. */
export function stripGuides(document: Record<string, unknown>): Record<string, unknown> {
  const doc = { ...document };
  delete doc.axes;
  delete doc.legends;
  if (Array.isArray(doc.marks)) {
    doc.marks = (doc.marks as Record<string, unknown>[]).map((m) =>
      m.type === "group" ? stripGuides(m) : m,
    );
  }
  return doc;
}

/** Render one candidate preview to an SVG string (placeholder on failure). */
export async function renderThumbnail(
  client: ServiceClient,
  chart: ChartDoc,
  interactions: InteractionsDoc,
): Promise<ThumbnailResult> {
  try {
    const compiled = await client.compile(sampleChart(chart), interactions, "vega");
    const runtime = vega.parse(stripGuides(compiled.document) as vega.Spec);
    const view = new vega.View(runtime, { renderer: "none" });
    const svg = await view.toSVG(THUMBNAIL_SCALE);
    view.finalize();
    return { ok: true, svg };
  } catch {
    return { ok: false, svg: null };
  }
}

export function candidateLabel(candidate: SelectionDoc | ApplicationDoc): string {
  if ("on" in candidate) {
    const sel = candidate as SelectionDoc;
    if (sel.kind === "interval") {
      return `brush ${sel.projection.join("+") || "2d"}`;
    }
    const proj = sel.projection.length ? ` by ${sel.projection.join(",")}` : "";
    return `${sel.cardinality} point${proj}`;
  }
  const app = candidate as ApplicationDoc;
  if (app.kind === "conditional_encoding") return `${app.channel} → ${app.target}`;
  if (app.kind === "filter") return `filter ${app.target}`;
  if (app.kind === "pan_zoom") return `pan & zoom ${app.target}`;
  return `${app.kind} ${app.target}`;
}
