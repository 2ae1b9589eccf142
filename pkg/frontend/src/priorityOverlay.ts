// Priority shading: recommended units overlay the table with a color
// whose density falls as the (row + column) priority grows; the
// reference unit is darkest. Range sliders re-query the service.

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { Locator, Recommendation } from "./types.js";

export interface OverlayCell {
  block: Recommendation["block"];
  rowPriority: number;
  colPriority: number;
  alpha: number;
}

const MAX_ALPHA = 0.85;
const MIN_ALPHA = 0.15;

/** Shading strength per recommendation; 0 + 0 (the reference) is darkest. */
export function shadingAlphas(recs: Recommendation[]): OverlayCell[] {
  if (!recs.length) return [];
  const total = (r: Recommendation) => r.row_priority + r.col_priority;
  const worst = Math.max(...recs.map(total), 1);
  return recs.map((r) => ({
    block: r.block,
    rowPriority: r.row_priority,
    colPriority: r.col_priority,
    alpha: MAX_ALPHA - (MAX_ALPHA - MIN_ALPHA) * (total(r) / worst),
  }));
}

export interface PriorityRanges {
  rowLo: number;
  rowHi?: number;
  colLo: number;
  colHi?: number;
}

export class PriorityOverlay {
  readonly element: HTMLElement;
  private notice: HTMLElement;
  private shadeHost: HTMLElement;
  private current: Recommendation[] = [];

  constructor(
    private doc: Document,
    private api: ApiClient,
    private sessionId: () => string,
  ) {
    this.element = doc.createElement("div");
    this.element.className = "ht-priority-overlay";
    this.notice = doc.createElement("p");
    this.notice.className = "ht-priority-notice";
    this.notice.hidden = true;
    this.shadeHost = doc.createElement("div");
    this.shadeHost.className = "ht-priority-shades";
    this.element.append(this.notice, this.shadeHost);
  }

  recommendations(): Recommendation[] {
    return this.current;
  }

  async refresh(
    row: Locator,
    col: Locator,
    mechanism: "topology" | "name",
    ranges: PriorityRanges,
  ): Promise<Recommendation[]> {
    try {
      this.current = await this.api.recommend(this.sessionId(), row, col, mechanism, ranges);
    } catch (error) {
      if (error instanceof ApiError && error.body.code === "NoRecommendation") {
        this.current = [];
        this.notice.textContent =
          "No recommendations: the selection spans more than one subtree.";
        this.notice.hidden = false;
        this.shadeHost.textContent = "";
        return [];
      }
      throw error;
    }
    this.notice.hidden = true;
    this.renderShades();
    return this.current;
  }

  private renderShades(): void {
    this.shadeHost.textContent = "";
    for (const cell of shadingAlphas(this.current)) {
      const div = this.doc.createElement("div");
      div.className = "ht-shade";
      div.dataset.rowStart = String(cell.block.row_start);
      div.dataset.rowEnd = String(cell.block.row_end);
      div.dataset.colStart = String(cell.block.col_start);
      div.dataset.colEnd = String(cell.block.col_end);
      div.dataset.rowPriority = String(cell.rowPriority);
      div.dataset.colPriority = String(cell.colPriority);
      div.style.backgroundColor = `rgba(31, 96, 196, ${cell.alpha.toFixed(3)})`;
      this.shadeHost.appendChild(div);
    }
  }
}
