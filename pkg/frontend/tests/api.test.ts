import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api";

interface Captured {
  url: string;
  init?: RequestInit;
}

function clientWith(
  makeResponse: () => Response,
): { client: ApiClient; captured: Captured } {
  const captured: Captured = { url: "" };
  const client = new ApiClient("", async (url, init) => {
    captured.url = url;
    captured.init = init;
    return makeResponse();
  });
  return { client, captured };
}

const ok = (payload: unknown) =>
  new Response(JSON.stringify(payload), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });

describe("request shapes", () => {
  it("uploads a chart as POST {svg}", async () => {
    const { client, captured } = clientWith(() =>
      ok({ chart_id: "c", revision: 0, canvas: {}, elements: [], warnings: [] }),
    );
    await client.uploadChart("<svg/>");
    expect(captured.url).toBe("/api/charts");
    expect(captured.init?.method).toBe("POST");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      svg: "<svg/>",
    });
    expect((captured.init?.headers as any)["Content-Type"]).toBe(
      "application/json",
    );
  });

  it("puts scope exclusions", async () => {
    const { client, captured } = clientWith(() => ok({ revision: 0 }));
    await client.putScope("c", ["/svg/rect[9]"]);
    expect(captured.url).toBe("/api/charts/c/scope");
    expect(captured.init?.method).toBe("PUT");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      excluded: ["/svg/rect[9]"],
    });
  });

  it("posts selections and suggestion requests with an elements field", async () => {
    const { client, captured } = clientWith(() => ok({ revision: 0 }));
    await client.postSelection("c", ["a", "b"]);
    expect(captured.url).toBe("/api/charts/c/selection");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      elements: ["a", "b"],
    });
    await client.postSuggestions("c", ["a"]);
    expect(captured.url).toBe("/api/charts/c/suggestions");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      elements: ["a"],
    });
  });

  it("applies a cached suggestion by id", async () => {
    const { client, captured } = clientWith(() =>
      ok({ new_revision: 1, svg: "<svg/>", invalidated: true }),
    );
    await client.applySuggestion("c", 0, 2);
    expect(captured.url).toBe("/api/charts/c/edits");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      base_revision: 0,
      suggestion_id: 2,
    });
  });

  it("applies a tweaked command verbatim", async () => {
    const { client, captured } = clientWith(() =>
      ok({ new_revision: 1, svg: "<svg/>", invalidated: true }),
    );
    await client.applyEditCommand("c", 4, {
      type: "set_attribute",
      element_id: "/svg/rect[1]",
      name: "stroke-width",
      value: "2",
    });
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      base_revision: 4,
      edit_command: {
        type: "set_attribute",
        element_id: "/svg/rect[1]",
        name: "stroke-width",
        value: "2",
      },
    });
  });

  it("replaces the whole document from the editor", async () => {
    const { client, captured } = clientWith(() =>
      ok({ new_revision: 1, svg: "<svg2/>", invalidated: true }),
    );
    await client.replaceSvg("c", 0, "<svg2/>");
    expect(JSON.parse(captured.init?.body as string)).toEqual({
      base_revision: 0,
      svg: "<svg2/>",
    });
  });

  it("reads the SVG with its revision header", async () => {
    const { client } = clientWith(() =>
      new Response("<svg>current</svg>", {
        status: 200,
        headers: { "Content-Type": "image/svg+xml", "X-Revision": "7" },
      }),
    );
    const result = await client.getSvg("c");
    expect(result).toEqual({ svg: "<svg>current</svg>", revision: 7 });
  });
});

describe("error mapping", () => {
  it("surfaces the service's error envelope", async () => {
    const { client } = clientWith(() =>
      new Response(
        JSON.stringify({
          code: "unprocessable",
          message: "group covers the whole chart; salience undefined",
          detail: "WholeChartGroup",
        }),
        { status: 422 },
      ),
    );
    const error = await client.postSelection("c", ["a"]).catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(422);
    expect(error.code).toBe("unprocessable");
    expect(error.detail).toBe("WholeChartGroup");
    expect(error.message).toMatch(/whole chart/);
  });

  it("handles non-JSON error bodies", async () => {
    const { client } = clientWith(() =>
      new Response("Bad Gateway", { status: 502 }),
    );
    const error = await client.getPatterns("c").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(502);
    expect(error.code).toBe("internal");
    expect(error.message).toBe("HTTP 502");
  });

  it("keeps validation-style detail objects readable", async () => {
    const { client } = clientWith(() =>
      new Response(
        JSON.stringify({ detail: [{ loc: ["body", "elements"] }] }),
        { status: 422 },
      ),
    );
    const error = await client.postSelection("c", ["a"]).catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.message).toContain("elements");
  });
});
