/** Shared test scaffolding: a canned SVG chart, payload builders with
 * sentinel numbers, and an in-memory fake of the psight HTTP API that
 * enforces the same revision semantics as the real service. */

import type {
  ApiPattern,
  ApiSuggestion,
  DimensionHistograms,
  EffectsResponse,
  PatternReport,
  SelectionResponse,
  SuggestionsResponse,
} from "../src/types";

export const SAMPLE_SVG = [
  '<svg xmlns="http://www.w3.org/2000/svg" width="220" height="120">',
  '<rect x="10" y="60" width="24" height="50" fill="#4682b4"/>',
  '<rect x="44" y="40" width="24" height="70" fill="#4682b4"/>',
  '<rect x="78" y="20" width="24" height="90" fill="#4682b4"/>',
  '<rect x="112" y="70" width="24" height="40" fill="#9aa5ad"/>',
  '<rect x="146" y="50" width="24" height="60" fill="#9aa5ad"/>',
  '<circle cx="196" cy="30" r="10" fill="#9aa5ad"/>',
  "</svg>",
].join("");

export const SAMPLE_IDS = [
  "/svg/rect[1]",
  "/svg/rect[2]",
  "/svg/rect[3]",
  "/svg/rect[4]",
  "/svg/rect[5]",
  "/svg/circle[1]",
];

export const BLUE_GROUP = ["/svg/rect[1]", "/svg/rect[2]", "/svg/rect[3]"];

export function histogram(counts: number[]): { bin_edges: number[]; counts: number[] } {
  const edges = Array.from({ length: counts.length + 1 }, (_, i) => i / counts.length);
  return { bin_edges: edges, counts };
}

export function dimensionSet(
  selected: boolean,
): Record<string, DimensionHistograms> {
  const dims: Record<string, DimensionHistograms> = {
    fill_hue_sin: { all: histogram([3, 0, 0, 0, 0, 0, 0, 0, 0, 3]) },
    fill_lightness: { all: histogram([0, 2, 2, 2, 0, 0, 0, 0, 0, 0]) },
    bbox_left: { all: histogram([1, 1, 1, 1, 1, 0, 0, 0, 0, 1]) },
    stroke_width: { all: histogram([6, 0, 0, 0, 0, 0, 0, 0, 0, 0]) },
  };
  if (selected) {
    dims.fill_hue_sin.selection = histogram([3, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    dims.fill_hue_sin.selection_variance = 0.0;
    dims.fill_lightness.selection = histogram([0, 2, 1, 0, 0, 0, 0, 0, 0, 0]);
    dims.fill_lightness.selection_variance = 0.0225;
    dims.bbox_left.selection = histogram([1, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
    dims.bbox_left.selection_variance = 0.0625;
    dims.stroke_width.selection = histogram([3, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    dims.stroke_width.selection_variance = 0.0;
  }
  return dims;
}

export function samplePatterns(revision: number): PatternReport {
  const patterns: ApiPattern[] = [
    {
      elements: [...BLUE_GROUP],
      origin: "model_full",
      salience: { ratio: 1.84, display: 64.789, intra_avg: 0.96, inter_avg: 0.52 },
      contributing_dims: ["fill_hue_sin", "fill_lightness", "bbox_left"],
      type_counts: { rect: 3 },
    },
    {
      elements: ["/svg/rect[4]", "/svg/rect[5]"],
      origin: "model_subrep(1)",
      salience: { ratio: 1.21, display: 54.75, intra_avg: 0.9, inter_avg: 0.74 },
      contributing_dims: ["fill_lightness", "bbox_left"],
      type_counts: { rect: 2 },
    },
    {
      elements: ["/svg/rect[1]", "/svg/rect[2]", "/svg/rect[3]", "/svg/rect[4]"],
      origin: "model_subrep(2)",
      salience: { ratio: 1.02, display: 50.49, intra_avg: 0.8, inter_avg: 0.78 },
      contributing_dims: ["bbox_left"],
      type_counts: { rect: 4 },
    },
  ];
  return {
    revision,
    scope: [...SAMPLE_IDS],
    patterns,
    core_patterns: [["/svg/rect[1]", "/svg/rect[2]", "/svg/rect[3]"]],
    similar_links: [[0, 2]],
  };
}

export function sampleSuggestions(revision: number): SuggestionsResponse {
  const suggestions: ApiSuggestion[] = [
    {
      suggestion_id: 0,
      kind: "add_dimension",
      dim: "stroke_width",
      value: 2.0,
      code_expression: "stroke-width → 2",
      gain: 3.1275,
      target_group: [...BLUE_GROUP],
      conflicts_checked: true,
      edit_commands: BLUE_GROUP.map((id) => ({
        type: "set_attribute" as const,
        element_id: id,
        name: "stroke-width",
        value: "2",
      })),
    },
    {
      suggestion_id: 1,
      kind: "modify_dimension",
      dim: "fill_lightness",
      value: 0.75,
      code_expression: "fill → lightness 0.75",
      gain: 1.5,
      target_group: [...BLUE_GROUP],
      conflicts_checked: true,
      edit_commands: BLUE_GROUP.map((id) => ({
        type: "set_attribute" as const,
        element_id: id,
        name: "fill",
        value: "rgb(157, 183, 214)",
      })),
    },
    {
      suggestion_id: 2,
      kind: "annotation",
      dim: null,
      value: null,
      code_expression: "surrounding rectangle",
      gain: 0.0,
      target_group: [...BLUE_GROUP],
      conflicts_checked: true,
      edit_commands: [
        {
          type: "insert_annotation",
          kind: "rect",
          geometry: { x: 8, y: 18, width: 96, height: 94 },
          style: { stroke: "rgb(51, 51, 51)", "stroke-dasharray": "4 2" },
        },
      ],
    },
  ];
  return { revision, suggestions };
}

export interface FakeRequestLogEntry {
  method: string;
  path: string;
  body: unknown;
}

/** In-memory stand-in for the service: revision checks, 422 for whole-chart
 * selections, 400 for unparseable editor saves, 409 for stale edits. The
 * perceptual numbers it returns are fixed sentinels so tests can assert the
 * UI shows them untouched. */
export class FakeBackend {
  revision = 0;
  svgText = SAMPLE_SVG;
  chartId = "fake-chart-0001";
  selection: string[] = [];
  excluded: string[] = [];
  log: FakeRequestLogEntry[] = [];
  failNextEditWith409 = false;
  uploads = 0;

  salienceFor(elements: string[]): SelectionResponse["salience"] {
    const sorted = [...elements].sort();
    if (sorted.join() === [...BLUE_GROUP].sort().join()) {
      return { ratio: 1.84, display: 64.789, intra_avg: 0.96, inter_avg: 0.52 };
    }
    return {
      ratio: 1.0 + elements.length / 100,
      display: 50.0 + elements.length,
      intra_avg: 0.9,
      inter_avg: 0.6,
    };
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.log.push({ method, path, body });
    return this.route(method, path, body);
  };

  private json(payload: unknown, status = 200, headers?: Record<string, string>) {
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json", ...headers },
    });
  }

  private error(status: number, code: string, message: string, detail: string) {
    return this.json({ code, message, detail }, status);
  }

  private route(method: string, path: string, body: any): Response {
    if (method === "POST" && path === "/api/charts") {
      if (!String(body.svg).includes("<svg")) {
        return this.error(400, "bad_request", "syntax error: no svg root", "MalformedSvg");
      }
      this.uploads += 1;
      this.revision = 0;
      this.svgText = body.svg;
      this.selection = [];
      this.excluded = [];
      return this.json({
        chart_id: this.chartId,
        revision: 0,
        canvas: { width: 220, height: 120 },
        elements: [],
        warnings: [],
      });
    }
    if (!path.startsWith(`/api/charts/${this.chartId}/`)) {
      return this.error(404, "not_found", "unknown chart", "NotFound");
    }
    const tail = path.slice(`/api/charts/${this.chartId}/`.length);
    switch (`${method} ${tail}`) {
      case "GET patterns":
        return this.json(samplePatterns(this.revision));
      case "PUT scope":
        this.excluded = [...body.excluded];
        return this.json({
          ...samplePatterns(this.revision),
          scope: SAMPLE_IDS.filter((id) => !this.excluded.includes(id)),
        });
      case "POST selection": {
        if (!body.elements.length) {
          return this.error(400, "bad_request", "selection is empty", "EmptyScope");
        }
        this.selection = [...body.elements];
        const scoped = SAMPLE_IDS.filter((id) => !this.excluded.includes(id));
        if (new Set(body.elements).size >= scoped.length) {
          return this.error(
            422,
            "unprocessable",
            "group covers the whole chart; salience undefined",
            "WholeChartGroup",
          );
        }
        const payload: SelectionResponse = {
          revision: this.revision,
          elements: [...body.elements].sort(),
          salience: this.salienceFor(body.elements),
          contributing_dims: ["fill_hue_sin", "fill_lightness"],
          effect_histograms: { dimensions: dimensionSet(true) },
        };
        return this.json(payload);
      }
      case "GET effects": {
        const payload: EffectsResponse = {
          revision: this.revision,
          dimensions: dimensionSet(this.selection.length > 0),
        };
        return this.json(payload);
      }
      case "POST suggestions":
        this.selection = [...body.elements];
        return this.json(sampleSuggestions(this.revision));
      case "POST edits": {
        if (this.failNextEditWith409 || body.base_revision !== this.revision) {
          this.failNextEditWith409 = false;
          return this.error(
            409,
            "conflict",
            `base_revision ${body.base_revision} is stale; current revision is ${this.revision}`,
            "StaleSuggestion",
          );
        }
        if (body.svg !== undefined && body.svg !== null) {
          if (!String(body.svg).includes("<svg")) {
            return this.error(400, "bad_request", "syntax error: malformed chart", "MalformedSvg");
          }
          this.svgText = body.svg;
        } else if (body.edit_command) {
          if (body.edit_command.type === "set_attribute") {
            // crude but deterministic: no-op text change marker
            this.svgText = this.svgText.replace(
              "</svg>",
              `<!--${body.edit_command.name}=${body.edit_command.value}--></svg>`,
            );
          }
        } else if (body.suggestion_id === undefined || body.suggestion_id === null) {
          return this.error(400, "bad_request", "edit request carries no command", "EmptyScope");
        } else if (body.suggestion_id < 0 || body.suggestion_id > 2) {
          return this.error(404, "not_found", "no suggestion at this revision", "NotFound");
        }
        this.revision += 1;
        return this.json({
          new_revision: this.revision,
          svg: this.svgText,
          invalidated: true,
        });
      }
      case "GET svg":
        return new Response(this.svgText, {
          status: 200,
          headers: {
            "Content-Type": "image/svg+xml",
            "X-Revision": String(this.revision),
          },
        });
      default:
        return this.error(404, "not_found", `no route ${method} ${tail}`, "NotFound");
    }
  }
}

/** Poll until `check` stops throwing (assertions) or returns true. */
export async function waitFor(
  check: () => boolean | void | Promise<boolean | void>,
  timeoutMs = 5000,
): Promise<void> {
  const start = Date.now();
  for (;;) {
    try {
      if ((await check()) !== false) return;
    } catch (error) {
      if (Date.now() - start > timeoutMs) throw error;
    }
    if (Date.now() - start > timeoutMs) {
      throw new Error("waitFor timed out");
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}
