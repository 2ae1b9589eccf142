// Canned fixture data and a request-capturing fake fetch.

import type { FetchLike } from "../src/api.js";
import type { EntriesPage, ModelSummary, Recommendation } from "../src/types.js";

export const FIXTURE_SUMMARY: ModelSummary = {
  version: 1,
  n_rows: 8,
  n_cols: 6,
  row_axis: {
    depth: 3,
    leaf_count: 8,
    level_names: ["region", "country", "city"],
    uniform_boundaries: [false, false],
    bicluster_from: null,
    nodes: [
      {
        name: "Asia",
        children: [
          { name: "CHN", children: [{ name: "PEK" }, { name: "SHA" }] },
          { name: "JPN", children: [{ name: "OSA" }, { name: "TKY" }] },
        ],
      },
      {
        name: "Europe",
        children: [
          { name: "FRA", children: [{ name: "PAR" }, { name: "MRS" }] },
          { name: "GBR", children: [{ name: "LON" }, { name: "LIV" }] },
        ],
      },
    ],
  },
  col_axis: {
    depth: 2,
    leaf_count: 6,
    level_names: ["year", "season"],
    uniform_boundaries: [true],
    bicluster_from: 1,
    nodes: [
      {
        name: "2020",
        children: [
          { name: "&", kind: "derived", stat: "sum" },
          { name: "spr" },
          { name: "aut" },
        ],
      },
      {
        name: "2021",
        children: [
          { name: "&", kind: "derived", stat: "sum" },
          { name: "spr" },
          { name: "aut" },
        ],
      },
    ],
  },
};

export const FIXTURE_PAGE: EntriesPage = {
  offset: 0,
  total_rows: 8,
  rows: [
    [204, 108, 96, 216, 112, 104],
    [250, 131, 119, 258, 135, 123],
    [166, 87, 79, 172, 90, 82],
    [270, 142, 128, 276, 146, 130],
    [220, 118, 102, 230, 121, 109],
    [138, 73, 65, 144, 76, 68],
    [236, 125, 111, 244, 129, 115],
    [178, 95, 83, 186, 98, 88],
  ],
};

export const FIXTURE_RECOMMENDATIONS: Recommendation[] = [
  { block: { row_start: 1, row_end: 2, col_start: 1, col_end: 2 },
    row_locator: [["Asia", "CHN", "SHA"]], col_locator: [["2020", "spr"]],
    row_priority: 0, col_priority: 0 },
  { block: { row_start: 0, row_end: 1, col_start: 1, col_end: 2 },
    row_locator: [["Asia", "CHN", "PEK"]], col_locator: [["2020", "spr"]],
    row_priority: 1, col_priority: 0 },
  { block: { row_start: 2, row_end: 3, col_start: 1, col_end: 2 },
    row_locator: [["Asia", "JPN", "OSA"]], col_locator: [["2020", "spr"]],
    row_priority: 2, col_priority: 0 },
];

export const FIXTURE_TEMPLATES = [
  {
    id: "stacked_bar",
    category: "Overview",
    aggregation: "none",
    channels: [
      { channel_name: "x", accepted_roles: ["x_nominal", "value"], required: true },
      { channel_name: "y", accepted_roles: ["y_nominal", "value"], required: true },
      { channel_name: "color", accepted_roles: ["x_nominal", "y_nominal"], required: true },
    ],
  },
  {
    id: "unit_color",
    category: "Unit",
    aggregation: "none",
    channels: [
      { channel_name: "color", accepted_roles: ["value"], required: true },
    ],
  },
];

export interface CapturedRequest {
  url: string;
  method: string;
  body: unknown;
}

export interface FakeRoute {
  match: (url: string, method: string) => boolean;
  status?: number;
  reply: (request: CapturedRequest) => unknown;
}

export function fakeFetch(routes: FakeRoute[], captured: CapturedRequest[]): FetchLike {
  return async (url, init) => {
    const method = init?.method ?? "GET";
    const request: CapturedRequest = {
      url,
      method,
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    captured.push(request);
    const route = routes.find((r) => r.match(url, method));
    if (!route) {
      return new Response(JSON.stringify({ code: "NotFound", message: url }),
                          { status: 404 });
    }
    return new Response(JSON.stringify(route.reply(request)),
                        { status: route.status ?? 200 });
  };
}
