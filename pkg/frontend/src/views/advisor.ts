/** Assessment & suggestions: one panel for the whole chart (how much of the
 * design space the chart already uses, which dimensions are still free) and
 * one for the current selection (salience verdict plus the server's ranked
 * suggestions). Suggestion values can be adjusted before applying; applying
 * posts the edit and refreshes every panel at the new revision. */

import { el, clear, fmt } from "../dom";
import { salienceVerdict } from "../salience_color";
import type { StudioController } from "../controller";
import type { Store } from "../store";
import type { ApiSuggestion, EditCommand } from "../types";

export class AdvisorView {
  private chartPanel: HTMLElement;
  private selectionPanel: HTMLElement;
  private renderedKey = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly store: Store,
    private readonly controller: StudioController,
  ) {
    this.chartPanel = el("div", { class: "advisor-chart" });
    this.selectionPanel = el("div", { class: "advisor-selection" });
    root.append(
      el("div", { class: "panel-title" }, "Assessment & suggestions"),
      el("div", { class: "panel-subtitle" }, "All elements"),
      this.chartPanel,
      el("div", { class: "panel-subtitle" }, "Selected elements"),
      this.selectionPanel,
    );
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const state = this.store.state;
    const key = JSON.stringify([
      state.effects?.revision ?? -1,
      state.effects ? Object.keys(state.effects.dimensions).length : 0,
      state.selectionInfo,
      state.selectionNote,
      state.suggestions,
      state.selection,
    ]);
    if (key === this.renderedKey) return;
    this.renderedKey = key;
    this.renderChartPanel();
    this.renderSelectionPanel();
  }

  /** Chart-wide usage summary, read from the effects histograms: a dimension
   * whose values all land in one bin is uniform across the chart (free for
   * encoding); spread across several bins means it is already in use. */
  private renderChartPanel(): void {
    clear(this.chartPanel);
    const effects = this.store.state.effects;
    if (!effects) {
      this.chartPanel.append(el("span", { class: "muted" }, "no chart loaded"));
      return;
    }
    const varying: [string, number][] = [];
    const uniform: string[] = [];
    for (const [name, data] of Object.entries(effects.dimensions)) {
      const occupied = data.all.counts.filter((count) => count > 0).length;
      if (occupied > 1) varying.push([name, occupied]);
      else uniform.push(name);
    }
    this.chartPanel.append(
      el(
        "div",
        { class: "usage-count" },
        `${varying.length} of ${
          varying.length + uniform.length
        } dimensions vary across the chart`,
      ),
      el(
        "div",
        { class: "usage-varying" },
        ...varying.map(([name, occupied]) =>
          el(
            "span",
            { class: "dim-chip in-use", "data-dim": name },
            `${name} · ${occupied} bins`,
          ),
        ),
      ),
      el("div", { class: "panel-subtitle" }, "Unused dimensions"),
      el(
        "div",
        { class: "usage-uniform" },
        ...uniform.map((name) =>
          el("span", { class: "dim-chip free", "data-dim": name }, name),
        ),
      ),
    );
  }

  private renderSelectionPanel(): void {
    clear(this.selectionPanel);
    const state = this.store.state;
    if (state.selectionNote) {
      this.selectionPanel.append(
        el("div", { class: "readout-note" }, state.selectionNote),
      );
      return;
    }
    if (state.selection.length === 0) {
      this.selectionPanel.append(
        el("span", { class: "muted" }, "select elements to assess"),
      );
      return;
    }
    if (state.selectionInfo?.salience) {
      const s = state.selectionInfo.salience;
      this.selectionPanel.append(
        el(
          "div",
          { class: "verdict", "data-display": String(s.display) },
          `Salience ${fmt(s.display)} — this group ${salienceVerdict(s.display)}.`,
        ),
        el(
          "div",
          { class: "verdict-dims muted" },
          state.selectionInfo.contributing_dims.length > 0
            ? `carried by ${state.selectionInfo.contributing_dims.join(", ")}`
            : "",
        ),
      );
    }
    const suggestions = state.suggestions?.suggestions ?? [];
    if (suggestions.length === 0) {
      this.selectionPanel.append(
        el("span", { class: "muted" }, "no suggestions for this selection"),
      );
      return;
    }
    const list = el("div", { class: "suggestion-list" });
    for (const suggestion of suggestions) {
      list.append(this.suggestionRow(suggestion));
    }
    this.selectionPanel.append(list);
  }

  private suggestionRow(suggestion: ApiSuggestion): HTMLElement {
    const inputs: { command: EditCommand; fields: HTMLInputElement[] }[] = [];
    const commandRows = suggestion.edit_commands.map((command) => {
      const fields: HTMLInputElement[] = [];
      const row = el("div", { class: "command-row" });
      if (command.type === "set_attribute") {
        const input = el("input", {
          class: "command-value",
          "data-element": command.element_id,
          "data-attribute": command.name,
        }) as HTMLInputElement;
        input.value = command.value;
        fields.push(input);
        row.append(
          el("span", { class: "muted" }, `${command.element_id} ${command.name} = `),
          input,
        );
      } else if (command.type === "batch_shift") {
        const dx = el("input", { class: "command-dx" }) as HTMLInputElement;
        const dy = el("input", { class: "command-dy" }) as HTMLInputElement;
        dx.value = String(command.dx);
        dy.value = String(command.dy);
        fields.push(dx, dy);
        row.append(
          el(
            "span",
            { class: "muted" },
            `shift ${command.element_ids.length} elements by `,
          ),
          dx,
          dy,
        );
      } else {
        row.append(
          el("span", { class: "muted" }, `insert ${command.kind} annotation`),
        );
      }
      inputs.push({ command, fields });
      return row;
    });

    const apply = el(
      "button",
      {
        class: "apply-suggestion",
        "data-suggestion-id": String(suggestion.suggestion_id),
        onclick: (event: Event) => {
          event.stopPropagation();
          void this.apply(suggestion, inputs);
        },
      },
      "Apply",
    );

    return el(
      "div",
      {
        class: "suggestion-row",
        "data-kind": suggestion.kind,
        "data-gain": String(suggestion.gain),
      },
      el(
        "div",
        { class: "suggestion-head" },
        el("span", { class: "suggestion-kind" }, suggestion.kind),
        suggestion.dim
          ? el("span", { class: "dim-chip" }, suggestion.dim)
          : null,
        el(
          "span",
          { class: "suggestion-gain" },
          ` gain ${suggestion.gain >= 0 ? "+" : ""}${fmt(suggestion.gain, 3)}`,
        ),
        suggestion.conflicts_checked
          ? el("span", { class: "conflict-ok muted" }, " · conflict-free")
          : null,
        apply,
      ),
      el("code", { class: "suggestion-code" }, suggestion.code_expression),
      el("div", { class: "suggestion-commands" }, ...commandRows),
    );
  }

  /** Untouched values apply atomically through the server's suggestion
   * cache; edited values apply as the individual commands carrying them. */
  private async apply(
    suggestion: ApiSuggestion,
    inputs: { command: EditCommand; fields: HTMLInputElement[] }[],
  ): Promise<void> {
    let tweaked = false;
    const commands: EditCommand[] = inputs.map(({ command, fields }) => {
      if (command.type === "set_attribute") {
        const value = fields[0].value;
        if (value !== command.value) tweaked = true;
        return { ...command, value };
      }
      if (command.type === "batch_shift") {
        const dx = Number(fields[0].value);
        const dy = Number(fields[1].value);
        if (dx !== command.dx || dy !== command.dy) tweaked = true;
        return { ...command, dx, dy };
      }
      return command;
    });
    await this.controller.applySuggestion(
      suggestion,
      tweaked ? commands : undefined,
    );
  }
}
