/** Effect distribution panel: one histogram per dimension straight from the
 * effects payload, with the selection's share drawn inside the chart-wide
 * bars. A toggle orders the panels by the server-reported in-selection
 * variance, ascending or descending. */

import { el, svgEl, clear } from "../dom";
import { orderDimensions } from "../histogram_order";
import type { Store, HistogramOrder } from "../store";
import type { DimensionHistograms, Histogram } from "../types";

const BAR_BOX_WIDTH = 150;
const BAR_BOX_HEIGHT = 40;

export class EffectsView {
  private list: HTMLElement;
  private ascButton: HTMLButtonElement;
  private descButton: HTMLButtonElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly store: Store,
  ) {
    this.list = el("div", { class: "effects-list" });
    this.ascButton = el(
      "button",
      {
        class: "sort-asc",
        onclick: () => this.store.setHistogramOrder("variance_asc"),
      },
      "variance ↑",
    ) as HTMLButtonElement;
    this.descButton = el(
      "button",
      {
        class: "sort-desc",
        onclick: () => this.store.setHistogramOrder("variance_desc"),
      },
      "variance ↓",
    ) as HTMLButtonElement;
    root.append(
      el(
        "div",
        { class: "panel-title" },
        "Effect distributions ",
        el("span", { class: "sort-buttons" }, this.ascButton, this.descButton),
      ),
      this.list,
    );
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const state = this.store.state;
    this.ascButton.classList.toggle(
      "active",
      state.histogramOrder === "variance_asc",
    );
    this.descButton.classList.toggle(
      "active",
      state.histogramOrder === "variance_desc",
    );
    clear(this.list);
    if (!state.effects) {
      this.list.append(el("span", { class: "muted" }, "no chart loaded"));
      return;
    }
    const dimensions = state.effects.dimensions;
    const hasSelection = state.selection.length > 0;
    const names = orderDimensions(dimensions, state.histogramOrder);
    for (const name of names) {
      this.list.append(
        this.dimensionRow(name, dimensions[name], hasSelection, state.histogramOrder),
      );
    }
  }

  private dimensionRow(
    name: string,
    data: DimensionHistograms,
    hasSelection: boolean,
    order: HistogramOrder,
  ): HTMLElement {
    const varianceBadge =
      hasSelection && data.selection_variance !== undefined
        ? el(
            "span",
            {
              class: "variance-badge",
              "data-variance": String(data.selection_variance),
            },
            ` var ${data.selection_variance.toExponential(2)}`,
          )
        : null;
    return el(
      "div",
      { class: "effect-row", "data-dimension": name, "data-order": order },
      el("div", { class: "effect-name" }, name, varianceBadge),
      this.histogramSvg(
        data.all,
        hasSelection ? data.selection : undefined,
      ),
    );
  }

  private histogramSvg(all: Histogram, selection?: Histogram): SVGElement {
    const svg = svgEl("svg", {
      class: "histogram",
      width: String(BAR_BOX_WIDTH),
      height: String(BAR_BOX_HEIGHT),
      viewBox: `0 0 ${BAR_BOX_WIDTH} ${BAR_BOX_HEIGHT}`,
    });
    const peak = Math.max(1, ...all.counts);
    const n = all.counts.length;
    const slot = BAR_BOX_WIDTH / n;
    all.counts.forEach((count, i) => {
      const height = (count / peak) * (BAR_BOX_HEIGHT - 2);
      svg.append(
        svgEl("rect", {
          class: "hist-bar",
          "data-count": String(count),
          x: String(i * slot + 1),
          y: String(BAR_BOX_HEIGHT - height),
          width: String(slot - 2),
          height: String(height),
        }),
      );
      const selectedCount = selection?.counts[i] ?? 0;
      if (selection && selectedCount > 0) {
        const selectedHeight = (selectedCount / peak) * (BAR_BOX_HEIGHT - 2);
        svg.append(
          svgEl("rect", {
            class: "hist-bar-selected",
            "data-count": String(selectedCount),
            x: String(i * slot + 1),
            y: String(BAR_BOX_HEIGHT - selectedHeight),
            width: String(slot - 2),
            height: String(selectedHeight),
          }),
        );
      }
    });
    return svg;
  }
}
