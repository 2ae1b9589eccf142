// Four-panel assembly: transformation operators, the table with priority
// shading, the template gallery, and the binding editor with preview.

import { ApiClient } from "./api.js";
import { ConfigPanel, type Renderer, jsonRenderer } from "./configPanel.js";
import { DragSwapController, attachDragHandlers } from "./dragSwap.js";
import { attachExportButton } from "./exporter.js";
import { PriorityOverlay } from "./priorityOverlay.js";
import { TableView } from "./tableView.js";
import type { Locator, ModelSummary } from "./types.js";

export interface AppOptions {
  baseUrl: string;
  viewportRows?: number;
  renderer?: Renderer;
  fetchImpl?: ConstructorParameters<typeof ApiClient>[1];
}

export class App {
  readonly element: HTMLElement;
  readonly api: ApiClient;
  readonly config: ConfigPanel;
  readonly overlay: PriorityOverlay;
  table: TableView | null = null;
  drag: DragSwapController | null = null;
  sessionId = "";
  mechanism: "topology" | "name" = "topology";
  selection: { row: Locator; col: Locator } | null = null;
  private summary: ModelSummary | null = null;
  private toast: HTMLElement;
  private tableHost: HTMLElement;
  private embedHost: HTMLElement;
  private viewportRows: number;

  constructor(private doc: Document, options: AppOptions) {
    this.api = new ApiClient(options.baseUrl, options.fetchImpl);
    this.viewportRows = options.viewportRows ?? 50;
    this.element = doc.createElement("main");
    this.element.className = "ht-app";
    this.toast = doc.createElement("p");
    this.toast.className = "ht-toast";
    this.toast.hidden = true;
    this.tableHost = doc.createElement("section");
    this.tableHost.className = "ht-table-panel";
    this.embedHost = doc.createElement("div");
    this.embedHost.className = "ht-embeds";
    this.overlay = new PriorityOverlay(doc, this.api, () => this.sessionId);
    this.config = new ConfigPanel(doc, this.api, () => this.sessionId,
                                  options.renderer ?? jsonRenderer);
    const exportButton = doc.createElement("button");
    exportButton.className = "ht-export";
    exportButton.textContent = "Export bundle";
    attachExportButton(doc, exportButton, this.api, () => this.sessionId);
    this.element.append(this.toast, this.tableHost, this.overlay.element,
                        this.config.element, this.embedHost, exportButton);
  }

  async open(tableDoc: unknown): Promise<string> {
    const uploaded = await this.api.upload(tableDoc);
    this.sessionId = uploaded.session_id;
    await this.config.load();
    await this.refresh(uploaded.summary);
    return this.sessionId;
  }

  async refresh(summary?: ModelSummary): Promise<void> {
    this.summary = summary ?? (await this.api.summary(this.sessionId));
    const page = await this.api.entries(this.sessionId, 0, this.viewportRows);
    if (!this.table) {
      this.table = new TableView(this.doc, this.summary, page,
                                 { viewportRows: this.viewportRows });
      this.tableHost.appendChild(this.table.element);
      this.drag = new DragSwapController(
        this.api, this.sessionId, () => this.summary!, {
          onModel: (next) => void this.refresh(next),
          onRejected: (message) => this.showToast(message),
        },
      );
      attachDragHandlers(this.table.element, this.drag);
    } else {
      this.table.update(this.summary, page);
    }
  }

  showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.hidden = false;
  }

  async selectUnit(row: Locator, col: Locator): Promise<void> {
    const selected = await this.api.select(this.sessionId, row, col);
    this.selection = { row: selected.row_locator, col: selected.col_locator };
    await this.overlay.refresh(selected.row_locator, selected.col_locator,
                               this.mechanism, { rowLo: 0, colLo: 0 });
  }
}
