/** Ordering of the effect-distribution panels. The variance used for sorting
 * is the server-computed `selection_variance`; dimensions without one (no
 * selection) keep the payload order and go after the sorted block. */

import type { DimensionHistograms } from "./types";
import type { HistogramOrder } from "./store";

export function orderDimensions(
  dimensions: Record<string, DimensionHistograms>,
  order: HistogramOrder,
): string[] {
  const names = Object.keys(dimensions);
  const position = new Map(names.map((name, i) => [name, i]));
  const withVariance = names.filter(
    (name) => dimensions[name].selection_variance !== undefined,
  );
  const withoutVariance = names.filter(
    (name) => dimensions[name].selection_variance === undefined,
  );
  const sign = order === "variance_asc" ? 1 : -1;
  withVariance.sort((a, b) => {
    const delta =
      dimensions[a].selection_variance! - dimensions[b].selection_variance!;
    if (delta !== 0) return sign * delta;
    return position.get(a)! - position.get(b)!;
  });
  return [...withVariance, ...withoutVariance];
}
