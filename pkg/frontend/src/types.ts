/** Payload shapes of the psight HTTP API, mirrored field-for-field. */

export interface BBox {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export type Paint = [number, number, number, number] | null;

export interface ApiElementStyle {
  fill: Paint;
  stroke: Paint;
  stroke_width: number | null;
  opacity: number;
}

export interface ApiElement {
  id: string;
  kind: string;
  closed: boolean;
  bbox: BBox;
  style: ApiElementStyle;
}

export interface ChartUploadResponse {
  chart_id: string;
  revision: number;
  canvas: { width: number; height: number };
  elements: ApiElement[];
  warnings: string[];
}

export interface SalienceScore {
  ratio: number;
  display: number;
  intra_avg: number;
  inter_avg: number;
}

export interface ApiPattern {
  elements: string[];
  origin: string;
  salience: SalienceScore | null;
  contributing_dims: string[];
  type_counts: Record<string, number>;
}

export interface PatternReport {
  revision: number;
  scope: string[];
  patterns: ApiPattern[];
  core_patterns: string[][];
  similar_links: [number, number][];
}

export interface Histogram {
  bin_edges: number[];
  counts: number[];
}

export interface DimensionHistograms {
  all: Histogram;
  selection?: Histogram;
  selection_variance?: number;
}

export interface EffectsResponse {
  revision: number;
  dimensions: Record<string, DimensionHistograms>;
}

export interface SelectionResponse {
  revision: number;
  elements: string[];
  salience: SalienceScore | null;
  contributing_dims: string[];
  effect_histograms: { dimensions: Record<string, DimensionHistograms> };
}

export type EditCommand =
  | { type: "set_attribute"; element_id: string; name: string; value: string }
  | { type: "batch_shift"; element_ids: string[]; dx: number; dy: number }
  | {
      type: "insert_annotation";
      kind: string;
      geometry: Record<string, unknown>;
      style: Record<string, string>;
    };

export interface ApiSuggestion {
  suggestion_id: number;
  kind: string;
  dim: string | null;
  value: number | null;
  code_expression: string;
  gain: number;
  target_group: string[];
  conflicts_checked: boolean;
  edit_commands: EditCommand[];
}

export interface SuggestionsResponse {
  revision: number;
  suggestions: ApiSuggestion[];
}

export interface EditResponse {
  new_revision: number;
  svg: string;
  invalidated: boolean;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: string;
}
