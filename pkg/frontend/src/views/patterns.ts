/** Patterns list: an overview strip of squares (one per identified pattern,
 * colored by salience, connected exactly along the report's similar_links)
 * above detail cards. A card shows a thumbnail with non-members dimmed,
 * the type counts, contributing dimensions, and the salience numbers.
 * Clicking a square scrolls to its card; clicking a card selects the
 * pattern's members everywhere. */

import { el, svgEl, clear, fmt } from "../dom";
import { nodeIndex } from "../dompath";
import { salienceColor } from "../salience_color";
import type { StudioController } from "../controller";
import type { Store } from "../store";
import type { ApiPattern } from "../types";

const SQUARE = 22;
const GAP = 14;
const STRIP_HEIGHT = 64;
const DIM_OPACITY = "0.15";

export class PatternsView {
  private strip: HTMLElement;
  private cards: HTMLElement;
  private renderedReportJson = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly store: Store,
    private readonly controller: StudioController,
  ) {
    this.strip = el("div", { class: "pattern-strip" });
    this.cards = el("div", { class: "pattern-cards" });
    root.append(
      el("div", { class: "panel-title" }, "Patterns"),
      this.strip,
      this.cards,
    );
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const state = this.store.state;
    const report = state.report;
    const reportJson = JSON.stringify(report) + state.svgText;
    if (reportJson !== this.renderedReportJson) {
      this.renderedReportJson = reportJson;
      this.renderStrip();
      this.renderCards();
    }
    this.markActive();
  }

  private markActive(): void {
    const active = this.store.state.activePattern;
    this.cards
      .querySelectorAll(".pattern-card")
      .forEach((card, index) =>
        card.classList.toggle("active", index === active),
      );
    this.strip
      .querySelectorAll(".pattern-square")
      .forEach((square, index) =>
        square.classList.toggle("active", index === active),
      );
  }

  private renderStrip(): void {
    clear(this.strip);
    const report = this.store.state.report;
    if (!report || report.patterns.length === 0) {
      this.strip.append(
        el("span", { class: "muted" }, "no patterns identified"),
      );
      return;
    }
    const n = report.patterns.length;
    const width = n * (SQUARE + GAP) + GAP;
    const svg = svgEl("svg", {
      class: "strip-svg",
      width: String(width),
      height: String(STRIP_HEIGHT),
      viewBox: `0 0 ${width} ${STRIP_HEIGHT}`,
    });
    const cx = (i: number) => GAP + i * (SQUARE + GAP) + SQUARE / 2;
    const cy = STRIP_HEIGHT - SQUARE / 2 - 6;

    // Links first so the squares draw on top. One line per similar_links
    // pair, exactly as reported.
    for (const [i, j] of report.similar_links) {
      const arc = svgEl("path", {
        class: "strip-link",
        "data-link": `${i}-${j}`,
        d: `M ${cx(i)} ${cy - SQUARE / 2} Q ${(cx(i) + cx(j)) / 2} ${
          cy - SQUARE / 2 - 18
        } ${cx(j)} ${cy - SQUARE / 2}`,
        fill: "none",
      });
      svg.append(arc);
    }
    report.patterns.forEach((pattern, index) => {
      const square = svgEl("rect", {
        class: "pattern-square",
        "data-pattern-index": String(index),
        x: String(cx(index) - SQUARE / 2),
        y: String(cy - SQUARE / 2),
        width: String(SQUARE),
        height: String(SQUARE),
        rx: "3",
        fill:
          pattern.salience === null
            ? "#bbb"
            : salienceColor(pattern.salience.display),
        onclick: () => this.focusCard(index),
      });
      square.append(
        svgEl(
          "title",
          {},
          pattern.salience === null
            ? "salience undefined"
            : `salience ${fmt(pattern.salience.display)}`,
        ),
      );
      svg.append(square);
    });
    this.strip.append(svg);
  }

  private focusCard(index: number): void {
    this.store.setActivePattern(index);
    const card = this.cards.querySelectorAll(".pattern-card")[index];
    if (card && typeof (card as HTMLElement).scrollIntoView === "function") {
      (card as HTMLElement).scrollIntoView({
        behavior: "smooth",
        block: "nearest",
      });
    }
  }

  private renderCards(): void {
    clear(this.cards);
    const report = this.store.state.report;
    if (!report) return;
    report.patterns.forEach((pattern, index) => {
      this.cards.append(this.card(pattern, index));
    });
    if (report.core_patterns.length > 0) {
      this.cards.append(
        el(
          "div",
          { class: "core-patterns muted" },
          `core patterns: ${report.core_patterns
            .map((core) => `{${core.join(", ")}}`)
            .join("  ")}`,
        ),
      );
    }
  }

  private card(pattern: ApiPattern, index: number): HTMLElement {
    const typeCounts = Object.entries(pattern.type_counts)
      .map(([kind, count]) => `${count} ${kind}`)
      .join(", ");
    const salience =
      pattern.salience === null
        ? el("span", { class: "muted" }, "salience undefined")
        : el(
            "span",
            {
              class: "card-salience",
              "data-display": String(pattern.salience.display),
            },
            `salience ${fmt(pattern.salience.display)} ` +
              `(ratio ${fmt(pattern.salience.ratio, 3)})`,
          );
    return el(
      "div",
      {
        class: "pattern-card",
        "data-pattern-index": String(index),
        onclick: () => {
          void this.controller.selectPattern(index);
        },
      },
      this.thumbnail(pattern),
      el(
        "div",
        { class: "card-body" },
        el(
          "div",
          { class: "card-head" },
          `#${index} · ${pattern.elements.length} elements · ${typeCounts}`,
        ),
        el("div", { class: "card-origin muted" }, pattern.origin),
        el(
          "div",
          { class: "card-dims" },
          ...pattern.contributing_dims.map((dim) =>
            el("span", { class: "dim-chip" }, dim),
          ),
        ),
        salience,
      ),
    );
  }

  /** Chart copy with every non-member dimmed to 15% opacity. */
  private thumbnail(pattern: ApiPattern): HTMLElement {
    const box = el("div", { class: "card-thumb" });
    box.innerHTML = this.store.state.svgText;
    const svgRoot = box.querySelector("svg");
    if (!svgRoot) return box;
    if (!svgRoot.getAttribute("viewBox")) {
      const width = parseFloat(svgRoot.getAttribute("width") ?? "");
      const height = parseFloat(svgRoot.getAttribute("height") ?? "");
      if (Number.isFinite(width) && Number.isFinite(height)) {
        svgRoot.setAttribute("viewBox", `0 0 ${width} ${height}`);
      }
    }
    svgRoot.removeAttribute("width");
    svgRoot.removeAttribute("height");
    const members = new Set(pattern.elements);
    for (const [id, node] of nodeIndex(svgRoot)) {
      if (!members.has(id)) {
        (node as SVGElement).setAttribute("opacity", DIM_OPACITY);
      }
    }
    return box;
  }
}
