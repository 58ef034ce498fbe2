/** Visual elements panel: the rendered chart plus selection machinery.
 * Click toggles one element; dragging draws a lasso (rectangle, or freehand
 * polygon when the freehand mode is on); type checkboxes batch-select; each
 * element row offers a scope-exclusion toggle; and the live salience readout
 * mirrors the selection endpoint's numbers exactly. */

import { el, clear, fmt } from "../dom";
import { idForNode, nodeIndex } from "../dompath";
import {
  hitsInPolygon,
  hitsInRect,
  normalizeRect,
  type HitTarget,
  type Point,
} from "../lasso";
import type { StudioController } from "../controller";
import type { Store } from "../store";

const DRAG_THRESHOLD = 4;

export class ElementsView {
  private chartBox: HTMLElement;
  private readout: HTMLElement;
  private kindsBox: HTMLElement;
  private scopeList: HTMLElement;
  private lassoCanvas: HTMLElement;
  private freehandToggle: HTMLInputElement;
  private excludeButton: HTMLButtonElement;
  private renderedSvgText = "";
  private idToNode = new Map<string, Element>();

  private dragStart: Point | null = null;
  private dragPath: Point[] = [];
  private dragging = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly store: Store,
    private readonly controller: StudioController,
  ) {
    this.chartBox = el("div", { class: "chart-box" });
    this.lassoCanvas = el("div", { class: "lasso-canvas" });
    this.readout = el("div", { class: "salience-readout" });
    this.kindsBox = el("div", { class: "kind-checkboxes" });
    this.scopeList = el("div", { class: "scope-list" });
    this.freehandToggle = el("input", { type: "checkbox" });
    this.excludeButton = el(
      "button",
      {
        class: "exclude-selected",
        onclick: () => {
          void this.controller.excludeFromScope(this.store.state.selection);
        },
      },
      "Exclude selection from scope",
    ) as HTMLButtonElement;

    const stage = el(
      "div",
      { class: "chart-stage" },
      this.chartBox,
      this.lassoCanvas,
    );
    stage.addEventListener("mousedown", (e) => this.onMouseDown(e as MouseEvent));
    stage.addEventListener("mousemove", (e) => this.onMouseMove(e as MouseEvent));
    stage.addEventListener("mouseup", (e) => this.onMouseUp(e as MouseEvent));

    root.append(
      el("div", { class: "panel-title" }, "Visual elements"),
      el(
        "div",
        { class: "elements-toolbar" },
        el("label", {}, this.freehandToggle, " freehand lasso"),
        this.excludeButton,
      ),
      stage,
      this.readout,
      this.kindsBox,
      el("div", { class: "panel-subtitle" }, "Scope"),
      this.scopeList,
    );
    store.subscribe(() => this.render());
    this.render();
  }

  // ----- selection interactions ------------------------------------------

  private stagePoint(event: MouseEvent): Point {
    const rect = this.chartBox.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  }

  private onMouseDown(event: MouseEvent): void {
    if (!this.store.state.chartId) return;
    this.dragStart = this.stagePoint(event);
    this.dragPath = [this.dragStart];
    this.dragging = false;
  }

  private onMouseMove(event: MouseEvent): void {
    if (!this.dragStart) return;
    const point = this.stagePoint(event);
    this.dragPath.push(point);
    if (
      Math.abs(point.x - this.dragStart.x) > DRAG_THRESHOLD ||
      Math.abs(point.y - this.dragStart.y) > DRAG_THRESHOLD
    ) {
      this.dragging = true;
    }
    this.drawLassoPreview(point);
  }

  private onMouseUp(event: MouseEvent): void {
    const start = this.dragStart;
    this.dragStart = null;
    clear(this.lassoCanvas);
    if (!start) return;
    if (!this.dragging) {
      this.handleClick(event);
      return;
    }
    const hits = this.freehandToggle.checked
      ? hitsInPolygon(this.hitTargets(), this.dragPath)
      : hitsInRect(
          this.hitTargets(),
          normalizeRect(start, this.stagePoint(event)),
        );
    void this.controller.select(hits);
  }

  private handleClick(event: MouseEvent): void {
    const target = event.target;
    if (!(target instanceof Element)) return;
    const svgRoot = this.chartBox.querySelector("svg");
    if (!svgRoot || !svgRoot.contains(target)) return;
    const id = idForNode(svgRoot, target);
    if (id === null) return;
    if (this.store.state.excluded.includes(id)) return;
    void this.controller.toggleElement(id);
  }

  /** Screen-space rectangles for the lasso, in stage coordinates. */
  private hitTargets(): HitTarget[] {
    const container = this.chartBox.getBoundingClientRect();
    const excluded = new Set(this.store.state.excluded);
    const targets: HitTarget[] = [];
    for (const [id, node] of this.idToNode) {
      if (excluded.has(id)) continue;
      const r = node.getBoundingClientRect();
      targets.push({
        id,
        rect: {
          left: r.left - container.left,
          top: r.top - container.top,
          right: r.right - container.left,
          bottom: r.bottom - container.top,
        },
      });
    }
    return targets;
  }

  private drawLassoPreview(current: Point): void {
    clear(this.lassoCanvas);
    if (!this.dragStart || !this.dragging) return;
    const preview = el("div", { class: "lasso-preview" });
    if (this.freehandToggle.checked) {
      preview.classList.add("lasso-freehand");
    } else {
      const rect = normalizeRect(this.dragStart, current);
      preview.style.left = `${rect.left}px`;
      preview.style.top = `${rect.top}px`;
      preview.style.width = `${rect.right - rect.left}px`;
      preview.style.height = `${rect.bottom - rect.top}px`;
    }
    this.lassoCanvas.append(preview);
  }

  // ----- rendering ---------------------------------------------------------

  private render(): void {
    const state = this.store.state;
    if (state.svgText !== this.renderedSvgText) {
      this.renderedSvgText = state.svgText;
      this.chartBox.innerHTML = state.svgText;
      const svgRoot = this.chartBox.querySelector("svg");
      this.idToNode = svgRoot ? nodeIndex(svgRoot) : new Map();
    }
    this.applySelectionClasses();
    this.renderReadout();
    this.renderKinds();
    this.renderScope();
    this.excludeButton.disabled = state.selection.length === 0;
  }

  private applySelectionClasses(): void {
    const selected = new Set(this.store.state.selection);
    const excluded = new Set(this.store.state.excluded);
    for (const [id, node] of this.idToNode) {
      node.classList.toggle("psight-selected", selected.has(id));
      node.classList.toggle("psight-excluded", excluded.has(id));
    }
  }

  private renderReadout(): void {
    const { selection, selectionInfo, selectionNote } = this.store.state;
    clear(this.readout);
    if (selectionNote) {
      this.readout.append(
        el("span", { class: "readout-note" }, selectionNote),
      );
      return;
    }
    if (selection.length === 0) {
      this.readout.append(
        el("span", { class: "readout-note" }, "no selection"),
      );
      return;
    }
    if (!selectionInfo || selectionInfo.salience === null) {
      this.readout.append(
        el("span", { class: "readout-note" }, `${selection.length} selected`),
      );
      return;
    }
    const s = selectionInfo.salience;
    this.readout.append(
      el("span", { class: "readout-count" }, `${selection.length} selected`),
      el(
        "span",
        { class: "readout-score", "data-display": String(s.display) },
        ` salience ${fmt(s.display)}`,
      ),
      el(
        "span",
        { class: "readout-detail" },
        ` (ratio ${fmt(s.ratio, 3)}, within ${fmt(s.intra_avg, 3)}, ` +
          `against ${fmt(s.inter_avg, 3)})`,
      ),
    );
  }

  private renderKinds(): void {
    const state = this.store.state;
    clear(this.kindsBox);
    const kinds = [...new Set(state.elements.map((e) => e.kind))];
    const selected = new Set(state.selection);
    for (const kind of kinds) {
      const ids = state.elements
        .filter((e) => e.kind === kind)
        .map((e) => e.id);
      const all = ids.length > 0 && ids.every((id) => selected.has(id));
      const box = el("input", {
        type: "checkbox",
        "data-kind": kind,
        onchange: () => {
          void this.controller.setKindSelected(kind, box.checked);
        },
      }) as HTMLInputElement;
      box.checked = all;
      this.kindsBox.append(
        el("label", { class: "kind-checkbox" }, box, ` ${kind} (${ids.length})`),
      );
    }
  }

  private renderScope(): void {
    const state = this.store.state;
    clear(this.scopeList);
    const excluded = new Set(state.excluded);
    for (const element of state.elements) {
      const box = el("input", {
        type: "checkbox",
        "data-exclude": element.id,
        onchange: () => {
          void (box.checked
            ? this.controller.excludeFromScope([element.id])
            : this.controller.includeInScope([element.id]));
        },
      }) as HTMLInputElement;
      box.checked = excluded.has(element.id);
      this.scopeList.append(
        el(
          "div",
          { class: "scope-row" },
          el("label", {}, box, " excluded"),
          el("span", { class: "scope-id" }, ` ${element.id}`),
          el("span", { class: "scope-kind" }, ` ${element.kind}`),
        ),
      );
    }
  }
}
