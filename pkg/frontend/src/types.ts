// Wire formats shared with the engine service.

export interface FieldDoc {
  name: string;
  type?: "nominal" | "ordinal" | "quantitative" | "temporal";
}

export interface DatasetDoc {
  id: string;
  fields: FieldDoc[];
  rows?: Record<string, unknown>[];
  url?: string;
}

export interface EncodingDoc {
  scale?: string;
  field?: string;
  value?: unknown;
  signal?: string;
}

export interface MarkDoc {
  id: string;
  type: string;
  dataset: string;
  encodings: Record<string, EncodingDoc>;
}

export interface ScaleDoc {
  id: string;
  channel: string;
  kind: "discrete" | "continuous";
  field: string;
  aggregate?: string;
  range?: [number, number];
}

export interface ViewDoc {
  id: string;
  width: number;
  height: number;
  scales: ScaleDoc[];
  marks: MarkDoc[];
}

export interface ChartDoc {
  version: 1;
  datasets: DatasetDoc[];
  views: ViewDoc[];
}

export type TraceEventKind =
  | "pointerdown"
  | "pointermove"
  | "pointerup"
  | "click"
  | "hoverenter";

export interface TraceEventDoc {
  kind: TraceEventKind;
  x: number;
  y: number;
  t: number;
  viewId: string;
  target?: { markId: string; datumIndex: number };
}

export interface SelectionDoc {
  id: string;
  kind: "point" | "interval";
  on: "click" | "hover" | "drag";
  view: string;
  projection: string[];
  cardinality?: "single" | "multi";
}

export interface ApplicationDoc {
  id: string;
  kind: "conditional_encoding" | "filter" | "pan_zoom" | "scale_domain";
  target: string;
  selection?: string;
  channel?: "color" | "opacity" | "size";
  selectedValue?: unknown;
  defaultValue?: unknown;
  scales?: string[];
  selfFilter?: boolean;
}

export interface WidgetDoc {
  id: string;
  field: string;
  widgetKind: "radio" | "select" | "range" | "text";
  comparator: "==" | "!=" | "<" | "<=" | ">" | ">=" | "between";
  applications: ApplicationDoc[];
}

export interface BindingDoc {
  signal: string;
  mark: string;
  property: "x" | "y" | "text" | "size" | "opacity";
}

export interface InteractionsDoc {
  version: 1;
  selections: SelectionDoc[];
  applications: ApplicationDoc[];
  widgets: WidgetDoc[];
  bindings: BindingDoc[];
}

export interface SignalDoc {
  name: string;
  space: "pixel" | "data";
  role: "start" | "end" | "value" | "mouse_x" | "mouse_y";
  selection: string;
  field: string | null;
  axis: string | null;
}

export interface SuggestionSetDoc {
  version: 1;
  selections: SelectionDoc[];
  applications: ApplicationDoc[];
  signals: SignalDoc[];
  defaultSelection: number;
  demonstration: Record<string, unknown>;
}

export interface WidgetSuggestionSetDoc {
  version: 1;
  widgets: WidgetDoc[];
  default: number;
}

export interface ExpressibilityEntry {
  code: string;
  ref: string;
  message: string;
}

export interface CompiledDoc {
  version: 1;
  target: "vega" | "vega_lite";
  document: Record<string, unknown>;
  expressibility: ExpressibilityEntry[];
}

export function emptyInteractions(): InteractionsDoc {
  return { version: 1, selections: [], applications: [], widgets: [], bindings: [] };
}
