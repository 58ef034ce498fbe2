import { describe, expect, it } from "vitest";
import { orderDimensions } from "../src/histogram_order";
import { histogram } from "./helpers";
import type { DimensionHistograms } from "../src/types";

function dims(
  entries: [string, number | undefined][],
): Record<string, DimensionHistograms> {
  const out: Record<string, DimensionHistograms> = {};
  for (const [name, variance] of entries) {
    out[name] = { all: histogram([1, 0, 0, 0, 0, 0, 0, 0, 0, 0]) };
    if (variance !== undefined) out[name].selection_variance = variance;
  }
  return out;
}

describe("orderDimensions", () => {
  it("sorts ascending and descending by the server-provided variance", () => {
    const data = dims([
      ["a", 0.5],
      ["b", 0.1],
      ["c", 0.9],
    ]);
    expect(orderDimensions(data, "variance_asc")).toEqual(["b", "a", "c"]);
    expect(orderDimensions(data, "variance_desc")).toEqual(["c", "a", "b"]);
  });

  it("breaks ties by payload order in both directions", () => {
    const data = dims([
      ["first", 0.2],
      ["second", 0.2],
      ["third", 0.2],
    ]);
    expect(orderDimensions(data, "variance_asc")).toEqual([
      "first",
      "second",
      "third",
    ]);
    expect(orderDimensions(data, "variance_desc")).toEqual([
      "first",
      "second",
      "third",
    ]);
  });

  it("keeps dimensions without a variance after the sorted block, in payload order", () => {
    const data = dims([
      ["plain1", undefined],
      ["varied", 0.3],
      ["plain2", undefined],
    ]);
    expect(orderDimensions(data, "variance_desc")).toEqual([
      "varied",
      "plain1",
      "plain2",
    ]);
  });

  it("falls back to payload order when nothing carries a variance", () => {
    const data = dims([
      ["x", undefined],
      ["y", undefined],
    ]);
    expect(orderDimensions(data, "variance_asc")).toEqual(["x", "y"]);
    expect(orderDimensions(data, "variance_desc")).toEqual(["x", "y"]);
  });

  it("handles an empty payload", () => {
    expect(orderDimensions({}, "variance_asc")).toEqual([]);
  });
});
