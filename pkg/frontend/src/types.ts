// Wire types of the table service API.

export type Locator = string[][];

export interface HeadingNodeJson {
  name: string;
  kind?: "plain" | "derived" | "key";
  stat?: "sum" | "avg" | "min" | "max";
  children?: HeadingNodeJson[];
}

export interface AxisSummary {
  depth: number;
  leaf_count: number;
  level_names: string[];
  nodes: HeadingNodeJson[];
  uniform_boundaries: boolean[];
  bicluster_from: number | null;
}

export interface ModelSummary {
  version: number;
  n_rows: number;
  n_cols: number;
  row_axis: AxisSummary;
  col_axis: AxisSummary;
}

export interface EntriesPage {
  offset: number;
  rows: (number | string | null)[][];
  total_rows: number;
}

export interface BlockJson {
  row_start: number;
  row_end: number;
  col_start: number;
  col_end: number;
}

export interface Recommendation {
  block: BlockJson;
  row_locator: Locator;
  col_locator: Locator;
  row_priority: number;
  col_priority: number;
}

export interface SelectResponse {
  name: string;
  block: BlockJson;
  row_locator: Locator;
  col_locator: Locator;
  row_single_subtree: boolean;
  col_single_subtree: boolean;
}

export interface TemplateChannel {
  channel_name: string;
  accepted_roles: string[];
  required: boolean;
}

export interface Template {
  id: string;
  category: string;
  channels: TemplateChannel[];
  aggregation: string;
}

export interface VisConfigJson {
  template_id: string;
  bindings: Record<string, string>;
  options?: Record<string, unknown>;
}

export interface VisualizeResponse {
  name: string;
  docs: GrammarDoc[];
}

export interface GrammarDoc {
  $schema?: string;
  width?: number;
  height?: number;
  usermeta?: { _hitailor?: { geometry: Geometry; unit: unknown } };
  [key: string]: unknown;
}

export interface Geometry {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: Record<string, unknown> | null;
}

export type TransformOp =
  | { op: "swap"; axis: "row" | "col"; upper_level: number }
  | { op: "transpose_level"; source_axis: "row" | "col"; level: number }
  | { op: "transpose_table" }
  | { op: "to_linear"; axis: "row" | "col"; level: number; stat: string }
  | { op: "to_stacked"; axis: "row" | "col"; level: number }
  | { op: "fold"; level: number }
  | { op: "unfold"; key_col_leaf: number; value_col_leaf: number };
