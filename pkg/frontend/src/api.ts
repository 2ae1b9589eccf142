// Typed client for the table service. Every server mutation the UI makes
// flows through this module; components do no model math of their own.

import type {
  ApiErrorBody,
  EntriesPage,
  Locator,
  ModelSummary,
  Recommendation,
  SelectResponse,
  Template,
  TransformOp,
  VisConfigJson,
  VisualizeResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body as ApiErrorBody);
    }
    return body as T;
  }

  upload(doc: unknown): Promise<{ session_id: string; summary: ModelSummary }> {
    return this.request("/tables", { method: "POST", body: JSON.stringify(doc) });
  }

  summary(sessionId: string): Promise<ModelSummary> {
    return this.request(`/tables/${sessionId}`);
  }

  entries(sessionId: string, offset: number, limit: number): Promise<EntriesPage> {
    return this.request(
      `/tables/${sessionId}/entries?offset=${offset}&limit=${limit}`,
    );
  }

  transform(
    sessionId: string,
    op: TransformOp,
  ): Promise<{ version: number; summary: ModelSummary }> {
    return this.request(`/tables/${sessionId}/transform`, {
      method: "POST",
      body: JSON.stringify(op),
    });
  }

  undo(sessionId: string): Promise<{ version: number; summary: ModelSummary }> {
    return this.request(`/tables/${sessionId}/undo`, { method: "POST" });
  }

  select(
    sessionId: string,
    row: Locator,
    col: Locator,
    name = "default",
  ): Promise<SelectResponse> {
    return this.request(`/tables/${sessionId}/select`, {
      method: "POST",
      body: JSON.stringify({ row, col, name }),
    });
  }

  recommend(
    sessionId: string,
    row: Locator,
    col: Locator,
    mechanism: "topology" | "name",
    ranges: { rowLo: number; rowHi?: number; colLo: number; colHi?: number },
  ): Promise<Recommendation[]> {
    const params = new URLSearchParams({
      row: JSON.stringify(row),
      col: JSON.stringify(col),
      mechanism,
      row_lo: String(ranges.rowLo),
      col_lo: String(ranges.colLo),
    });
    if (ranges.rowHi !== undefined) params.set("row_hi", String(ranges.rowHi));
    if (ranges.colHi !== undefined) params.set("col_hi", String(ranges.colHi));
    return this.request(`/tables/${sessionId}/recommend?${params.toString()}`);
  }

  templates(): Promise<Template[]> {
    return this.request("/templates");
  }

  visualize(
    sessionId: string,
    body: {
      unit?: { row: Locator; col: Locator };
      selection?: string;
      config: VisConfigJson;
      apply_to?: "selection" | "recommended";
      mechanism?: "topology" | "name";
      row_range?: [number, number | null];
      col_range?: [number, number | null];
      name?: string;
    },
  ): Promise<VisualizeResponse> {
    return this.request(`/tables/${sessionId}/visualize`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  async exportBundle(sessionId: string): Promise<unknown> {
    return this.request(`/tables/${sessionId}/export?format=bundle`);
  }

  async exportHtj(sessionId: string): Promise<unknown> {
    return this.request(`/tables/${sessionId}/export?format=htj`);
  }
}
