// The companion editor: live Vega canvas, implicit demonstration capture,
// suggestion thumbnails, signal chips with property dropzones, query-widget
// dropzone, and export.

import * as vega from "vega";

import { ApiError, ServiceClient } from "./api.js";
import { DemonstrationRecorder, type PointerSample } from "./recorder.js";
import {
  addBinding,
  addWidget,
  applyApplication,
  applySelection,
  closeInspector,
  demonstrationModeActive,
  hasDataBinding,
  initialState,
  openInspector,
  withSuggestions,
  type EditorState,
} from "./state.js";
import {
  applicationCandidateDoc,
  candidateLabel,
  renderThumbnail,
  selectionCandidateDoc,
} from "./thumbnails.js";
import type {
  BindingDoc,
  ChartDoc,
  SignalDoc,
  TraceEventDoc,
  WidgetDoc,
} from "./types.js";

export interface AppOptions {
  root: HTMLElement;
  chart: ChartDoc;
  serviceUrl: string;
  fetchImpl?: typeof fetch;
  renderer?: "svg" | "none";
  now?: () => number;
}

const BINDABLE_PROPERTIES: BindingDoc["property"][] = ["x", "y", "text", "size", "opacity"];

export class App {
  state: EditorState;
  readonly client: ServiceClient;
  liveView: vega.View | null = null;
  /** Resolves when the previews for the most recent demonstration are in the DOM. */
  suggestionsRendered: Promise<void> = Promise.resolve();

  private readonly root: HTMLElement;
  private readonly renderer: "svg" | "none";
  private readonly now: () => number;
  private readonly recorder: DemonstrationRecorder;
  private interactionCounter = 0;

  private canvasEl!: HTMLElement;
  private inspectorEl!: HTMLElement;
  private selectionThumbsEl!: HTMLElement;
  private applicationThumbsEl!: HTMLElement;
  private chipsEl!: HTMLElement;
  private messagesEl!: HTMLElement;
  private dropzonesEl!: HTMLElement;
  private widgetDropzoneEl!: HTMLElement;

  constructor(opts: AppOptions) {
    this.root = opts.root;
    this.state = initialState(opts.chart);
    this.client = new ServiceClient(opts.serviceUrl, opts.fetchImpl ?? fetch.bind(globalThis));
    this.renderer = opts.renderer ?? "svg";
    this.now = opts.now ?? (() => performance.now());
    this.recorder = new DemonstrationRecorder(
      () => this.state.chart,
      () => demonstrationModeActive(this.state),
      (events) => void this.handleTrace(events),
    );
    this.buildDom();
  }

  async start(): Promise<void> {
    await this.embedLive();
  }

  // -- DOM scaffolding -------------------------------------------------------

  private buildDom(): void {
    this.root.innerHTML = `
      <div id="toolbar">
        <button id="add-interaction">Add Interaction</button>
        <button id="export">Export</button>
      </div>
      <div id="main">
        <div id="canvas"></div>
        <div id="inspector" class="hidden">
          <div id="inspector-title"></div>
          <div id="messages"></div>
          <div class="section">Selections</div>
          <div id="selection-thumbs"></div>
          <div class="section">Applications</div>
          <div id="application-thumbs"></div>
          <div class="section">Signals</div>
          <div id="signal-chips"></div>
        </div>
      </div>
      <div id="dropzones" class="hidden"></div>
      <div id="widget-dropzone" class="hidden">drop a field here to create a query widget</div>
      <div id="widget-suggestions"></div>
    `;
    this.canvasEl = this.query("#canvas");
    this.inspectorEl = this.query("#inspector");
    this.selectionThumbsEl = this.query("#selection-thumbs");
    this.applicationThumbsEl = this.query("#application-thumbs");
    this.chipsEl = this.query("#signal-chips");
    this.messagesEl = this.query("#messages");
    this.dropzonesEl = this.query("#dropzones");
    this.widgetDropzoneEl = this.query("#widget-dropzone");

    this.query("#add-interaction").addEventListener("click", () => this.addInteraction());
    this.query("#export").addEventListener("click", () => void this.exportDocument());

    this.canvasEl.addEventListener("pointerdown", (ev) => {
      this.recorder.pointerDown(this.sampleFrom(ev as MouseEvent));
    });
    this.canvasEl.addEventListener("pointermove", (ev) => {
      this.recorder.pointerMove(this.sampleFrom(ev as MouseEvent));
    });
    this.canvasEl.addEventListener("pointerup", (ev) => {
      this.recorder.pointerUp(this.sampleFrom(ev as MouseEvent));
    });

    if (hasDataBinding(this.state.chart)) {
      this.widgetDropzoneEl.classList.remove("hidden");
      this.widgetDropzoneEl.addEventListener("dragover", (ev) => ev.preventDefault());
      this.widgetDropzoneEl.addEventListener("drop", (ev) => {
        const event = ev as DragEvent;
        event.preventDefault();
        const field = event.dataTransfer?.getData("text/field");
        if (field) void this.suggestWidgetsFor(field);
      });
    }
  }

  private query(selector: string): HTMLElement {
    const el = this.root.querySelector(selector);
    if (!el) throw new Error(`missing element ${selector}`);
    return el as HTMLElement;
  }

  private sampleFrom(ev: MouseEvent): PointerSample {
    const rect = this.canvasEl.getBoundingClientRect();
    const origin = this.liveView ? this.liveView.origin() : [0, 0];
    return {
      x: ev.clientX - rect.left - origin[0],
      y: ev.clientY - rect.top - origin[1],
      t: this.now(),
    };
  }

  /** Root-relative pointer input for scripted demonstrations. */
  simulatePointer(kind: "down" | "move" | "up", x: number, y: number, t?: number): void {
    const sample = { x, y, t: t ?? this.now() };
    if (kind === "down") this.recorder.pointerDown(sample);
    else if (kind === "move") this.recorder.pointerMove(sample);
    else this.recorder.pointerUp(sample);
  }

  flushPendingClicks(): void {
    this.recorder.flushClicks();
  }

  // -- Interaction lifecycle -------------------------------------------------

  addInteraction(): string {
    this.interactionCounter += 1;
    const id = `interaction_${this.interactionCounter}`;
    this.state = openInspector(this.state, id);
    this.inspectorEl.classList.remove("hidden");
    this.query("#inspector-title").textContent = id;
    this.setMessage("");
    return id;
  }

  closeInspector(): void {
    this.state = closeInspector(this.state);
    this.inspectorEl.classList.add("hidden");
  }

  // -- Demonstration handling ------------------------------------------------

  async handleTrace(events: TraceEventDoc[]): Promise<void> {
    if (!demonstrationModeActive(this.state) || events.length === 0) return;
    let resolveRendered!: () => void;
    this.suggestionsRendered = new Promise((r) => (resolveRendered = r));
    try {
      const suggestions = await this.client.suggest(this.state.chart, events);
      if (suggestions === null) return; // superseded by a newer demonstration
      this.state = withSuggestions(this.state, suggestions);
      await this.renderPreviews();
      this.setMessage("");
    } catch (err) {
      if (err instanceof ApiError) {
        this.setMessage(`[${err.code}] ${err.message}`);
        this.state = withSuggestions(this.state, null);
        this.clearPreviews();
      } else {
        throw err;
      }
    } finally {
      resolveRendered();
    }
  }

  private clearPreviews(): void {
    this.selectionThumbsEl.innerHTML = "";
    this.applicationThumbsEl.innerHTML = "";
    this.chipsEl.innerHTML = "";
  }

  async renderPreviews(): Promise<void> {
    const suggestions = this.state.lastSuggestions;
    this.clearPreviews();
    if (!suggestions) return;

    const jobs: Promise<void>[] = [];
    suggestions.selections.forEach((sel, index) => {
      const cell = this.thumbCell(
        candidateLabel(sel) + (index === suggestions.defaultSelection ? " (default)" : ""),
        () => void this.acceptSelection(index),
      );
      this.selectionThumbsEl.appendChild(cell.el);
      jobs.push(
        renderThumbnail(this.client, this.state.chart, selectionCandidateDoc(sel)).then(
          (r) => cell.fill(r.svg),
        ),
      );
    });
    suggestions.applications.forEach((app, index) => {
      const cell = this.thumbCell(candidateLabel(app), () => void this.acceptApplication(index));
      this.applicationThumbsEl.appendChild(cell.el);
      jobs.push(
        renderThumbnail(
          this.client,
          this.state.chart,
          applicationCandidateDoc(app, suggestions),
        ).then((r) => cell.fill(r.svg)),
      );
    });
    for (const signal of suggestions.signals) {
      this.chipsEl.appendChild(this.signalChip(signal));
    }
    await Promise.all(jobs);
  }

  private thumbCell(label: string, onClick: () => void): { el: HTMLElement; fill: (svg: string | null) => void } {
    const el = document.createElement("div");
    el.className = "thumb";
    const picture = document.createElement("div");
    picture.className = "thumb-picture";
    picture.textContent = "…";
    const caption = document.createElement("div");
    caption.className = "thumb-label";
    caption.textContent = label;
    el.appendChild(picture);
    el.appendChild(caption);
    el.addEventListener("click", onClick);
    return {
      el,
      fill: (svg) => {
        if (svg) {
          picture.innerHTML = svg;
          picture.classList.add("ready");
        } else {
          picture.textContent = "(preview unavailable)";
          picture.classList.add("placeholder");
        }
      },
    };
  }

  private signalChip(signal: SignalDoc): HTMLElement {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.textContent = `${signal.name} [${signal.space}]`;
    chip.draggable = true;
    chip.addEventListener("dragstart", (ev) => {
      (ev as DragEvent).dataTransfer?.setData("text/signal", signal.name);
      this.showDropzones(signal.name);
    });
    chip.addEventListener("dragend", () => this.hideDropzones());
    return chip;
  }

  private showDropzones(signalName: string): void {
    this.dropzonesEl.innerHTML = "";
    this.dropzonesEl.classList.remove("hidden");
    for (const view of this.state.chart.views) {
      for (const mark of view.marks) {
        for (const property of BINDABLE_PROPERTIES) {
          const zone = document.createElement("div");
          zone.className = "dropzone";
          zone.textContent = `${mark.id}.${property}`;
          zone.addEventListener("dragover", (ev) => ev.preventDefault());
          zone.addEventListener("drop", (ev) => {
            ev.preventDefault();
            void this.bindSignal(signalName, mark.id, property);
            this.hideDropzones();
          });
          this.dropzonesEl.appendChild(zone);
        }
      }
    }
  }

  private hideDropzones(): void {
    this.dropzonesEl.classList.add("hidden");
  }

  // -- Accepting suggestions ---------------------------------------------------

  async acceptSelection(index: number): Promise<void> {
    const suggestions = this.state.lastSuggestions;
    if (!suggestions) return;
    this.state = applySelection(this.state, suggestions.selections[index]);
    await this.embedLive();
  }

  async acceptApplication(index: number): Promise<void> {
    const suggestions = this.state.lastSuggestions;
    if (!suggestions) return;
    const fallback = suggestions.selections[suggestions.defaultSelection] ?? null;
    this.state = applyApplication(this.state, suggestions.applications[index], fallback);
    await this.embedLive();
  }

  /** Append a SignalBinding and recompile; invalid bindings roll back and
   *  surface the violation inline. */
  async bindSignal(
    signalName: string,
    markId: string,
    property: BindingDoc["property"],
  ): Promise<boolean> {
    const binding: BindingDoc = { signal: signalName, mark: markId, property };
    const previous = this.state;
    this.state = addBinding(this.state, binding);
    try {
      await this.embedLive();
      this.setMessage("");
      return true;
    } catch (err) {
      // The failed compile never replaced the live view; restore the state.
      this.state = previous;
      if (err instanceof ApiError) {
        const codes = Array.isArray(err.details)
          ? (err.details as { code?: string }[]).map((d) => d.code).filter(Boolean)
          : [];
        this.setMessage(`[${codes[0] ?? err.code}] ${err.message}`);
        return false;
      }
      throw err;
    }
  }

  async suggestWidgetsFor(field: string): Promise<WidgetDoc[]> {
    try {
      const result = await this.client.widgets(this.state.chart, field);
      const host = this.query("#widget-suggestions");
      host.innerHTML = "";
      result.widgets.forEach((widget, index) => {
        const button = document.createElement("button");
        button.textContent =
          `${widget.widgetKind} on ${widget.field}` +
          (index === result.default ? " (default)" : "");
        button.addEventListener("click", () => {
          this.state = addWidget(this.state, widget);
          void this.embedLive();
        });
        host.appendChild(button);
      });
      return result.widgets;
    } catch (err) {
      if (err instanceof ApiError) {
        this.setMessage(`[${err.code}] ${err.message}`);
        return [];
      }
      throw err;
    }
  }

  // -- Canvas + export ----------------------------------------------------------

  async embedLive(): Promise<void> {
    const compiled = await this.client.compile(this.state.chart, this.state.interactions, "vega");
    const runtime = vega.parse(compiled.document as vega.Spec);
    if (this.liveView) this.liveView.finalize();
    const view = new vega.View(runtime, { renderer: this.renderer });
    if (this.renderer !== "none") {
      view.initialize(this.canvasEl);
    }
    await view.runAsync();
    this.liveView = view;
  }

  async exportDocument(): Promise<Uint8Array> {
    const bytes = await this.client.compileDocumentBytes(
      this.state.chart,
      this.state.interactions,
      "vega",
    );
    const headless = typeof navigator !== "undefined"
      && navigator.userAgent.includes("jsdom");
    if (!headless && typeof URL !== "undefined"
        && typeof URL.createObjectURL === "function") {
      const blob = new Blob([bytes.slice().buffer], { type: "application/json" });
      const url = URL.createObjectURL(blob);
      const a = document.createElement("a");
      a.href = url;
      a.download = "interaction.vg.json";
      a.click();
      URL.revokeObjectURL(url);
    }
    return bytes;
  }

  private setMessage(message: string): void {
    this.messagesEl.textContent = message;
  }
}
