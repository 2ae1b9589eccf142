// Template gallery and binding editor. The role pickers are built from
// the server's accepted_roles tables, so a binding the server would
// reject cannot be selected at all; the preview shows the emitted
// document for the reference unit before fanning out.

import type { ApiClient } from "./api.js";
import type {
  GrammarDoc,
  Locator,
  Template,
  VisConfigJson,
  VisualizeResponse,
} from "./types.js";

export type Renderer = (doc: GrammarDoc, element: HTMLElement) => void;

/** Default renderer: stamp the grammar document for an external embedder. */
export const jsonRenderer: Renderer = (grammarDoc, element) => {
  element.textContent = JSON.stringify(grammarDoc, null, 2);
  element.setAttribute("data-grammar", "vega-lite-v5");
};

export class ConfigPanel {
  readonly element: HTMLElement;
  private gallery: HTMLElement;
  private editor: HTMLElement;
  private preview: HTMLElement;
  private templates: Template[] = [];
  private active: Template | null = null;
  private selects = new Map<string, HTMLSelectElement>();

  constructor(
    private doc: Document,
    private api: ApiClient,
    private sessionId: () => string,
    private renderer: Renderer = jsonRenderer,
  ) {
    this.element = doc.createElement("section");
    this.element.className = "ht-config-panel";
    this.gallery = doc.createElement("div");
    this.gallery.className = "ht-template-gallery";
    this.editor = doc.createElement("div");
    this.editor.className = "ht-binding-editor";
    this.preview = doc.createElement("div");
    this.preview.className = "ht-preview";
    this.element.append(this.gallery, this.editor, this.preview);
  }

  async load(): Promise<void> {
    this.templates = await this.api.templates();
    this.gallery.textContent = "";
    for (const template of this.templates) {
      const button = this.doc.createElement("button");
      button.textContent = template.id;
      button.dataset.templateId = template.id;
      button.dataset.category = template.category;
      button.addEventListener("click", () => this.activate(template.id));
      this.gallery.appendChild(button);
    }
  }

  activate(templateId: string): void {
    const template = this.templates.find((t) => t.id === templateId);
    if (!template) throw new Error(`unknown template ${templateId}`);
    this.active = template;
    this.editor.textContent = "";
    this.selects.clear();
    for (const channel of template.channels) {
      const label = this.doc.createElement("label");
      label.textContent = channel.channel_name;
      const select = this.doc.createElement("select");
      select.dataset.channel = channel.channel_name;
      if (!channel.required) {
        const none = this.doc.createElement("option");
        none.value = "";
        none.textContent = "(unbound)";
        select.appendChild(none);
      }
      // only legal roles become options; anything else is unselectable
      for (const role of channel.accepted_roles) {
        const option = this.doc.createElement("option");
        option.value = role;
        option.textContent = role;
        select.appendChild(option);
      }
      label.appendChild(select);
      this.editor.appendChild(label);
      this.selects.set(channel.channel_name, select);
    }
  }

  activeTemplate(): Template | null {
    return this.active;
  }

  bindingSelect(channel: string): HTMLSelectElement | undefined {
    return this.selects.get(channel);
  }

  config(): VisConfigJson {
    if (!this.active) throw new Error("no template selected");
    const bindings: Record<string, string> = {};
    for (const [channel, select] of this.selects) {
      if (select.value) bindings[channel] = select.value;
    }
    return { template_id: this.active.id, bindings };
  }

  /** Live preview of the reference unit's document. */
  async previewUnit(row: Locator, col: Locator): Promise<GrammarDoc> {
    const response = await this.api.visualize(this.sessionId(), {
      unit: { row, col },
      config: this.config(),
      apply_to: "selection",
      name: "__preview__",
    });
    const grammarDoc = response.docs[0];
    this.preview.textContent = "";
    const host = this.doc.createElement("div");
    this.preview.appendChild(host);
    this.renderer(grammarDoc, host);
    return grammarDoc;
  }

  /** Fan the configuration out over the recommended units and embed each. */
  async apply(
    row: Locator,
    col: Locator,
    mechanism: "topology" | "name",
    ranges: { row: [number, number | null]; col: [number, number | null] },
    embedHost: HTMLElement,
  ): Promise<VisualizeResponse> {
    const response = await this.api.visualize(this.sessionId(), {
      unit: { row, col },
      config: this.config(),
      apply_to: "recommended",
      mechanism,
      row_range: ranges.row,
      col_range: ranges.col,
    });
    embedHost.textContent = "";
    for (const grammarDoc of response.docs) {
      const geometry = grammarDoc.usermeta?._hitailor?.geometry;
      const cell = this.doc.createElement("div");
      cell.className = "ht-embedded-chart";
      if (geometry) {
        cell.style.position = "absolute";
        cell.style.left = `${geometry.x}px`;
        cell.style.top = `${geometry.y}px`;
        cell.style.width = `${geometry.width}px`;
        cell.style.height = `${geometry.height}px`;
      }
      this.renderer(grammarDoc, cell);
      embedHost.appendChild(cell);
    }
    return response;
  }
}
