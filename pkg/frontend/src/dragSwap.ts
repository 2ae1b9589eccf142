// Direct-manipulation transformations: dragging one heading level onto an
// adjacent one issues a swap; dragging onto the opposite axis gutter moves
// the level across. Drop cues appear only where the server model says the
// boundary is uniform, so an illegal drop never produces a request.

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { ModelSummary } from "./types.js";

export type Axis = "row" | "col";

export interface DragState {
  axis: Axis;
  level: number;
}

/** Uniform boundaries of an axis as swap upper levels (1-based). */
export function legalSwapBoundaries(summary: ModelSummary, axis: Axis): number[] {
  const ax = axis === "row" ? summary.row_axis : summary.col_axis;
  return ax.uniform_boundaries
    .map((uniform, i) => (uniform ? i + 1 : -1))
    .filter((lvl) => lvl > 0);
}

/** Whether dragging `from` over `target` (same axis) may issue a swap. */
export function swapCueVisible(
  summary: ModelSummary,
  drag: DragState,
  targetAxis: Axis,
  targetLevel: number,
): boolean {
  if (drag.axis !== targetAxis) return false;
  if (Math.abs(drag.level - targetLevel) !== 1) return false;
  const upper = Math.min(drag.level, targetLevel);
  return legalSwapBoundaries(summary, drag.axis).includes(upper);
}

export interface DragSwapEvents {
  onModel?: (summary: ModelSummary) => void;
  onRejected?: (message: string) => void;
}

export class DragSwapController {
  private drag: DragState | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private summaryProvider: () => ModelSummary,
    private events: DragSwapEvents = {},
  ) {}

  beginDrag(axis: Axis, level: number): void {
    this.drag = { axis, level };
  }

  activeDrag(): DragState | null {
    return this.drag;
  }

  /** Cue for a potential drop target; the UI shows a highlight only when true. */
  cueFor(axis: Axis, level: number): boolean {
    if (!this.drag) return false;
    return swapCueVisible(this.summaryProvider(), this.drag, axis, level);
  }

  /** Cue for the opposite-axis gutter (level transposition). */
  gutterCueFor(axis: Axis): boolean {
    return this.drag !== null && this.drag.axis !== axis;
  }

  /** Drop on a heading level of the same axis: swap when the cue is on. */
  async dropOnLevel(axis: Axis, level: number): Promise<boolean> {
    const drag = this.drag;
    this.drag = null;
    if (!drag) return false;
    if (!swapCueVisible(this.summaryProvider(), drag, axis, level)) {
      this.events.onRejected?.(
        `levels ${Math.min(drag.level, level)} and ${Math.max(drag.level, level)} ` +
        "do not form a cross product",
      );
      return false;
    }
    return this.issue({
      op: "swap",
      axis,
      upper_level: Math.min(drag.level, level),
    });
  }

  /** Drop on the opposite axis gutter: move the level across. */
  async dropOnGutter(targetAxis: Axis): Promise<boolean> {
    const drag = this.drag;
    this.drag = null;
    if (!drag || drag.axis === targetAxis) return false;
    return this.issue({
      op: "transpose_level",
      source_axis: drag.axis,
      level: drag.level,
    });
  }

  cancel(): void {
    this.drag = null;
  }

  private async issue(op: Parameters<ApiClient["transform"]>[1]): Promise<boolean> {
    try {
      const result = await this.api.transform(this.sessionId, op);
      this.events.onModel?.(result.summary);
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        this.events.onRejected?.(`${error.body.code}: ${error.body.message}`);
        return false;
      }
      throw error;
    }
  }
}

/** Wire mouse-based dragging of heading cells onto a rendered table. */
export function attachDragHandlers(
  table: HTMLTableElement,
  controller: DragSwapController,
): void {
  table.addEventListener("mousedown", (event) => {
    const th = (event.target as HTMLElement).closest?.("th[data-axis]");
    if (!th) return;
    const el = th as HTMLElement;
    controller.beginDrag(el.dataset.axis as Axis, Number(el.dataset.level));
  });
  table.addEventListener("mouseover", (event) => {
    const th = (event.target as HTMLElement).closest?.("th[data-axis]");
    if (!th) return;
    const el = th as HTMLElement;
    const cue = controller.cueFor(el.dataset.axis as Axis, Number(el.dataset.level));
    el.classList.toggle("ht-drop-cue", cue);
  });
  table.addEventListener("mouseup", (event) => {
    const th = (event.target as HTMLElement).closest?.("th[data-axis]");
    if (!th) {
      controller.cancel();
      return;
    }
    const el = th as HTMLElement;
    el.classList.remove("ht-drop-cue");
    void controller.dropOnLevel(el.dataset.axis as Axis, Number(el.dataset.level));
  });
}
