// Client for the engine service. Every request is logged (tests assert the
// implicit-demonstration-mode gating against this log), and suggest calls
// cancel any still-pending predecessor.

import type {
  ChartDoc,
  CompiledDoc,
  InteractionsDoc,
  SuggestionSetDoc,
  TraceEventDoc,
  WidgetSuggestionSetDoc,
} from "./types.js";

export interface RequestLogEntry {
  method: string;
  path: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown = null,
  ) {
    super(message);
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let code = `HTTP${resp.status}`;
  let message = resp.statusText;
  let details: unknown = null;
  try {
    const body = (await resp.json()) as Record<string, unknown>;
    code = String(body.code ?? code);
    message = String(body.message ?? message);
    details = body.details ?? null;
  } catch {
    // non-JSON error body
  }
  throw new ApiError(resp.status, code, message, details);
}

export class ServiceClient {
  readonly log: RequestLogEntry[] = [];
  private suggestController: AbortController | null = null;

  constructor(
    private readonly base: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async post(path: string, body: unknown, signal?: AbortSignal): Promise<Response> {
    this.log.push({ method: "POST", path });
    const resp = await this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    await raiseForStatus(resp);
    return resp;
  }

  /** Interpret a demonstration. A newer call aborts the one in flight;
   *  the aborted call resolves to null. */
  async suggest(chart: ChartDoc, trace: TraceEventDoc[]): Promise<SuggestionSetDoc | null> {
    this.suggestController?.abort();
    const controller = new AbortController();
    this.suggestController = controller;
    try {
      const resp = await this.post(
        "/api/suggest",
        { version: 1, chart, trace },
        controller.signal,
      );
      return (await resp.json()) as SuggestionSetDoc;
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return null;
      if (err instanceof Error && err.name === "AbortError") return null;
      throw err;
    } finally {
      if (this.suggestController === controller) this.suggestController = null;
    }
  }

  async compile(
    chart: ChartDoc,
    interactions: InteractionsDoc,
    target: "vega" | "vega-lite" | "auto" = "vega",
  ): Promise<CompiledDoc> {
    const resp = await this.post("/api/compile", {
      version: 1,
      chart,
      interactions,
      target,
    });
    return (await resp.json()) as CompiledDoc;
  }

  /** Raw document bytes, byte-identical to the engine's canonical output. */
  async compileDocumentBytes(
    chart: ChartDoc,
    interactions: InteractionsDoc,
    target: "vega" | "vega-lite" | "auto" = "vega",
  ): Promise<Uint8Array> {
    const resp = await this.post("/api/compile", {
      version: 1,
      chart,
      interactions,
      target,
      format: "document",
    });
    return new Uint8Array(await resp.arrayBuffer());
  }

  async widgets(chart: ChartDoc, field: string): Promise<WidgetSuggestionSetDoc> {
    const resp = await this.post("/api/widgets", { version: 1, chart, field });
    return (await resp.json()) as WidgetSuggestionSetDoc;
  }

  async health(): Promise<Record<string, unknown>> {
    this.log.push({ method: "GET", path: "/api/health" });
    const resp = await this.fetchImpl(`${this.base}/api/health`);
    await raiseForStatus(resp);
    return (await resp.json()) as Record<string, unknown>;
  }

  suggestCallCount(): number {
    return this.log.filter((e) => e.path === "/api/suggest").length;
  }
}
