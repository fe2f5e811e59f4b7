// Editor state and its transitions. Demonstration capture is active iff an
// interaction inspector is open (implicit demonstration mode).

import type {
  ApplicationDoc,
  BindingDoc,
  ChartDoc,
  InteractionsDoc,
  SelectionDoc,
  SuggestionSetDoc,
  WidgetDoc,
} from "./types.js";
import { emptyInteractions } from "./types.js";

export interface EditorState {
  chart: ChartDoc;
  interactions: InteractionsDoc;
  openInspector: string | null;
  lastSuggestions: SuggestionSetDoc | null;
}

export function initialState(chart: ChartDoc): EditorState {
  return {
    chart,
    interactions: emptyInteractions(),
    openInspector: null,
    lastSuggestions: null,
  };
}

export function demonstrationModeActive(state: EditorState): boolean {
  return state.openInspector !== null;
}

export function openInspector(state: EditorState, interactionId: string): EditorState {
  return { ...state, openInspector: interactionId };
}

export function closeInspector(state: EditorState): EditorState {
  return { ...state, openInspector: null, lastSuggestions: null };
}

export function withSuggestions(
  state: EditorState,
  suggestions: SuggestionSetDoc | null,
): EditorState {
  return { ...state, lastSuggestions: suggestions };
}

function upsertSelection(
  interactions: InteractionsDoc,
  selection: SelectionDoc,
): InteractionsDoc {
  const selections = interactions.selections.filter((s) => s.id !== selection.id);
  selections.push(selection);
  return { ...interactions, selections };
}

/** Accept a suggested selection candidate: it replaces any previous
 *  selection with the same id; applications referencing it survive. */
export function applySelection(state: EditorState, selection: SelectionDoc): EditorState {
  return { ...state, interactions: upsertSelection(state.interactions, selection) };
}

/** Accept a suggested application. The default selection candidate is
 *  materialized first if its id is not part of the design yet. */
export function applyApplication(
  state: EditorState,
  application: ApplicationDoc,
  defaultSelection: SelectionDoc | null,
): EditorState {
  let interactions = state.interactions;
  const selId = application.selection;
  if (selId && !interactions.selections.some((s) => s.id === selId)) {
    if (!defaultSelection || defaultSelection.id !== selId) {
      throw new Error(`application ${application.id} references missing selection ${selId}`);
    }
    interactions = upsertSelection(interactions, defaultSelection);
  }
  const applications = interactions.applications.filter((a) => a.id !== application.id);
  applications.push(application);
  return { ...state, interactions: { ...interactions, applications } };
}

export function addBinding(state: EditorState, binding: BindingDoc): EditorState {
  const bindings = state.interactions.bindings.filter(
    (b) => !(b.mark === binding.mark && b.property === binding.property),
  );
  bindings.push(binding);
  return { ...state, interactions: { ...state.interactions, bindings } };
}

export function removeBinding(state: EditorState, binding: BindingDoc): EditorState {
  const bindings = state.interactions.bindings.filter(
    (b) => !(b.signal === binding.signal && b.mark === binding.mark && b.property === binding.property),
  );
  return { ...state, interactions: { ...state.interactions, bindings } };
}

export function addWidget(state: EditorState, widget: WidgetDoc): EditorState {
  const widgets = state.interactions.widgets.filter((w) => w.id !== widget.id);
  widgets.push(widget);
  return { ...state, interactions: { ...state.interactions, widgets } };
}

/** The query-widget dropzone only appears once a data binding exists. */
export function hasDataBinding(chart: ChartDoc): boolean {
  return chart.views.some((view) =>
    view.marks.some((mark) =>
      Object.values(mark.encodings).some((enc) => enc.field !== undefined),
    ),
  );
}
