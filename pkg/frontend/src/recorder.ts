// Turns pointer activity on the canvas into demonstration traces.
//
// The recorder only observes pointerdown/move/up. A down/up pair moving
// less than the drag threshold counts as a click and joins a pending click
// chunk (flushed after the 800 ms chunking window); longer gestures emit a
// drag trace immediately on release. While no inspector is open the
// recorder is inactive and emits nothing.

import { viewAt, type ViewRegion } from "./layout.js";
import type { ChartDoc, TraceEventDoc } from "./types.js";

export const DRAG_EPSILON_PX = 4;
export const CLICK_CHUNK_MS = 800;

export interface PointerSample {
  x: number; // root-relative canvas coordinates
  y: number;
  t: number; // milliseconds, monotonic
}

type EmitTrace = (events: TraceEventDoc[]) => void;

export class DemonstrationRecorder {
  private down: PointerSample | null = null;
  private downRegion: ViewRegion | null = null;
  private moves: PointerSample[] = [];
  private pendingClicks: TraceEventDoc[] = [];
  private flushTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly chart: () => ChartDoc,
    private readonly isActive: () => boolean,
    private readonly emit: EmitTrace,
    private readonly scheduleFlush: boolean = true,
  ) {}

  pointerDown(sample: PointerSample): void {
    if (!this.isActive()) return;
    const region = viewAt(this.chart(), sample.x, sample.y);
    if (!region) return;
    this.down = sample;
    this.downRegion = region;
    this.moves = [];
  }

  pointerMove(sample: PointerSample): void {
    if (!this.isActive() || !this.down) return;
    this.moves.push(sample);
  }

  pointerUp(sample: PointerSample): void {
    if (!this.isActive() || !this.down || !this.downRegion) return;
    const down = this.down;
    const region = this.downRegion;
    const moves = this.moves;
    this.down = null;
    this.downRegion = null;
    this.moves = [];

    const dist = Math.hypot(sample.x - down.x, sample.y - down.y);
    if (dist < DRAG_EPSILON_PX) {
      this.pendingClicks.push(this.event("click", sample, region));
      this.armFlush(sample.t);
      return;
    }
    this.flushClicks();
    const events: TraceEventDoc[] = [this.event("pointerdown", down, region)];
    for (const move of moves) {
      events.push(this.event("pointermove", move, region));
    }
    events.push(this.event("pointerup", sample, region));
    this.emit(events);
  }

  /** Flush any pending click chunk immediately (tests, teardown). */
  flushClicks(): void {
    if (this.flushTimer !== null) {
      clearTimeout(this.flushTimer);
      this.flushTimer = null;
    }
    if (this.pendingClicks.length > 0) {
      const events = this.pendingClicks;
      this.pendingClicks = [];
      this.emit(events);
    }
  }

  private armFlush(_t: number): void {
    if (!this.scheduleFlush) return;
    if (this.flushTimer !== null) clearTimeout(this.flushTimer);
    this.flushTimer = setTimeout(() => {
      this.flushTimer = null;
      this.flushClicks();
    }, CLICK_CHUNK_MS);
  }

  private event(
    kind: TraceEventDoc["kind"],
    sample: PointerSample,
    region: ViewRegion,
  ): TraceEventDoc {
    return {
      kind,
      x: clamp(sample.x - region.ox, 0, region.view.width),
      y: clamp(sample.y - region.oy, 0, region.view.height),
      t: sample.t,
      viewId: region.view.id,
    };
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.max(lo, Math.min(hi, v));
}
