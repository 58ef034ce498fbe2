/** Typed client for the psight HTTP API. All perceptual quantities displayed
 * by the UI come from these responses untouched. */

import type {
  ChartUploadResponse,
  EditCommand,
  EditResponse,
  EffectsResponse,
  PatternReport,
  SelectionResponse,
  SuggestionsResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: string = "",
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let code = "internal";
  let message = `HTTP ${response.status}`;
  let detail = "";
  try {
    const body = await response.json();
    if (typeof body.code === "string") code = body.code;
    if (typeof body.message === "string") message = body.message;
    if (typeof body.detail === "string") detail = body.detail;
    else if (body.detail !== undefined) message = JSON.stringify(body.detail);
  } catch {
    // non-JSON error body; keep the status-line message
  }
  throw new ApiError(response.status, code, message, detail);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  uploadChart(svg: string): Promise<ChartUploadResponse> {
    return this.request("POST", "/api/charts", { svg });
  }

  getPatterns(chartId: string): Promise<PatternReport> {
    return this.request("GET", `/api/charts/${chartId}/patterns`);
  }

  putScope(chartId: string, excluded: string[]): Promise<PatternReport> {
    return this.request("PUT", `/api/charts/${chartId}/scope`, { excluded });
  }

  postSelection(
    chartId: string,
    elements: string[],
  ): Promise<SelectionResponse> {
    return this.request("POST", `/api/charts/${chartId}/selection`, {
      elements,
    });
  }

  getEffects(chartId: string): Promise<EffectsResponse> {
    return this.request("GET", `/api/charts/${chartId}/effects`);
  }

  postSuggestions(
    chartId: string,
    elements: string[],
  ): Promise<SuggestionsResponse> {
    return this.request("POST", `/api/charts/${chartId}/suggestions`, {
      elements,
    });
  }

  applySuggestion(
    chartId: string,
    baseRevision: number,
    suggestionId: number,
  ): Promise<EditResponse> {
    return this.request("POST", `/api/charts/${chartId}/edits`, {
      base_revision: baseRevision,
      suggestion_id: suggestionId,
    });
  }

  applyEditCommand(
    chartId: string,
    baseRevision: number,
    command: EditCommand,
  ): Promise<EditResponse> {
    return this.request("POST", `/api/charts/${chartId}/edits`, {
      base_revision: baseRevision,
      edit_command: command,
    });
  }

  replaceSvg(
    chartId: string,
    baseRevision: number,
    svg: string,
  ): Promise<EditResponse> {
    return this.request("POST", `/api/charts/${chartId}/edits`, {
      base_revision: baseRevision,
      svg,
    });
  }

  /** Current SVG text with the revision it belongs to (X-Revision header). */
  async getSvg(chartId: string): Promise<{ svg: string; revision: number }> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/api/charts/${chartId}/svg`,
      { method: "GET" },
    );
    await raiseForStatus(response);
    const revision = Number(response.headers.get("X-Revision") ?? "0");
    return { svg: await response.text(), revision };
  }
}
