// Table rendering: merged heading cells from the heading forests, with
// only the visible window of body rows materialized in the DOM.

import type { AxisSummary, EntriesPage, HeadingNodeJson, ModelSummary } from "./types.js";

export interface LevelCell {
  name: string;
  level: number;
  start: number; // leaf range, half open
  end: number;
  kind: string;
  path: string[];
}

/** Flatten a heading forest into per-level cell lists with leaf spans. */
export function levelCells(axis: AxisSummary): LevelCell[][] {
  const rows: LevelCell[][] = Array.from({ length: axis.depth }, () => []);
  let cursor = 0;

  const leafCount = (node: HeadingNodeJson): number =>
    node.children?.length
      ? node.children.reduce((acc, c) => acc + leafCount(c), 0)
      : 1;

  const visit = (node: HeadingNodeJson, level: number, path: string[]) => {
    const span = leafCount(node);
    const fullPath = [...path, node.name];
    rows[level - 1].push({
      name: node.name,
      level,
      start: cursor,
      end: cursor + span,
      kind: node.kind ?? "plain",
      path: fullPath,
    });
    if (node.children?.length) {
      for (const child of node.children) visit(child, level + 1, fullPath);
    } else {
      cursor += 1;
    }
  };
  for (const root of axis.nodes) visit(root, 1, []);
  return rows;
}

export interface TableViewOptions {
  viewportRows?: number; // body rows materialized at a time
  offset?: number;
}

export class TableView {
  readonly element: HTMLTableElement;
  private offset = 0;
  private viewportRows: number;

  constructor(
    private doc: Document,
    private summary: ModelSummary,
    private page: EntriesPage,
    options: TableViewOptions = {},
  ) {
    this.viewportRows = options.viewportRows ?? 50;
    this.offset = options.offset ?? 0;
    this.element = doc.createElement("table");
    this.element.className = "ht-table";
    this.render();
  }

  update(summary: ModelSummary, page: EntriesPage): void {
    this.summary = summary;
    this.page = page;
    this.offset = page.offset;
    this.render();
  }

  get version(): number {
    return this.summary.version;
  }

  private render(): void {
    this.element.textContent = "";
    this.element.dataset.version = String(this.summary.version);
    this.renderColumnHeadings();
    this.renderBody();
  }

  private renderColumnHeadings(): void {
    const thead = this.doc.createElement("thead");
    const cols = levelCells(this.summary.col_axis);
    const rowDepth = this.summary.row_axis.depth;
    cols.forEach((cells, levelIdx) => {
      const tr = this.doc.createElement("tr");
      if (levelIdx === 0) {
        const corner = this.doc.createElement("th");
        corner.className = "ht-corner";
        corner.colSpan = rowDepth;
        corner.rowSpan = cols.length;
        tr.appendChild(corner);
      }
      for (const cell of cells) {
        const th = this.doc.createElement("th");
        th.textContent = cell.name;
        th.colSpan = cell.end - cell.start;
        th.dataset.axis = "col";
        th.dataset.level = String(cell.level);
        th.dataset.start = String(cell.start);
        th.dataset.end = String(cell.end);
        th.dataset.kind = cell.kind;
        th.dataset.path = cell.path.join("/");
        tr.appendChild(th);
      }
      thead.appendChild(tr);
    });
    this.element.appendChild(thead);
  }

  private renderBody(): void {
    const tbody = this.doc.createElement("tbody");
    const rowCells = levelCells(this.summary.row_axis);
    const start = this.offset;
    const end = Math.min(start + this.viewportRows,
                         this.offset + this.page.rows.length,
                         this.summary.n_rows);
    for (let r = start; r < end; r++) {
      const tr = this.doc.createElement("tr");
      // heading cells whose span starts here (clipped to the window)
      for (const levelRow of rowCells) {
        for (const cell of levelRow) {
          const visibleStart = Math.max(cell.start, start);
          if (visibleStart !== r || cell.end <= start || cell.start >= end) continue;
          const th = this.doc.createElement("th");
          th.textContent = cell.name;
          th.rowSpan = Math.min(cell.end, end) - visibleStart;
          th.dataset.axis = "row";
          th.dataset.level = String(cell.level);
          th.dataset.start = String(cell.start);
          th.dataset.end = String(cell.end);
          th.dataset.kind = cell.kind;
          th.dataset.path = cell.path.join("/");
          tr.appendChild(th);
        }
      }
      const pageRow = this.page.rows[r - this.page.offset] ?? [];
      pageRow.forEach((value, c) => {
        const td = this.doc.createElement("td");
        td.textContent = value === null ? "" : String(value);
        td.dataset.row = String(r);
        td.dataset.col = String(c);
        tr.appendChild(td);
      });
      tbody.appendChild(tr);
    }
    this.element.appendChild(tbody);
  }
}
