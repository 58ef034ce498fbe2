/** Single UI state container. The rules it enforces:
 *   - the selection only ever references elements of the current revision;
 *   - payloads tagged with a revision other than the current one are
 *     discarded (acceptReport / acceptEffects / acceptSelectionInfo /
 *     acceptSuggestions are no-ops for stale data);
 *   - the active pattern index is always valid for the current report.
 */

import type {
  EffectsResponse,
  PatternReport,
  SelectionResponse,
  SuggestionsResponse,
} from "./types";

export type HistogramOrder = "variance_asc" | "variance_desc";

export interface ElementInfo {
  id: string;
  kind: string;
}

export interface EditorState {
  draft: string;
  error: string | null;
  dirty: boolean;
}

export interface UiState {
  chartId: string | null;
  revision: number;
  svgText: string;
  lastGoodSvgText: string;
  elements: ElementInfo[];
  warnings: string[];
  report: PatternReport | null;
  effects: EffectsResponse | null;
  selection: string[];
  selectionInfo: SelectionResponse | null;
  selectionNote: string | null;
  suggestions: SuggestionsResponse | null;
  excluded: string[];
  activePattern: number | null;
  histogramOrder: HistogramOrder;
  editor: EditorState;
  toast: string | null;
  busy: boolean;
}

export function initialState(): UiState {
  return {
    chartId: null,
    revision: 0,
    svgText: "",
    lastGoodSvgText: "",
    elements: [],
    warnings: [],
    report: null,
    effects: null,
    selection: [],
    selectionInfo: null,
    selectionNote: null,
    suggestions: null,
    excluded: [],
    activePattern: null,
    histogramOrder: "variance_desc",
    editor: { draft: "", error: null, dirty: false },
    toast: null,
    busy: false,
  };
}

export type Listener = (state: UiState) => void;

export class Store {
  private listeners = new Set<Listener>();
  state: UiState = initialState();

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  update(mutate: (state: UiState) => void): void {
    mutate(this.state);
    this.emit();
  }

  /** Fresh chart session (upload). Replaces everything. */
  resetChart(
    chartId: string,
    revision: number,
    svgText: string,
    elements: ElementInfo[],
    warnings: string[],
  ): void {
    this.state = {
      ...initialState(),
      chartId,
      revision,
      svgText,
      lastGoodSvgText: svgText,
      elements,
      warnings,
      editor: { draft: svgText, error: null, dirty: false },
      histogramOrder: this.state.histogramOrder,
    };
    this.emit();
  }

  /** An edit landed: move to the new revision. Every revision-tagged payload
   * becomes stale and is dropped; the selection keeps only ids that still
   * exist in the new element inventory. */
  advanceRevision(
    revision: number,
    svgText: string,
    elements: ElementInfo[],
  ): void {
    const existing = new Set(elements.map((e) => e.id));
    this.update((s) => {
      s.revision = revision;
      s.svgText = svgText;
      s.lastGoodSvgText = svgText;
      s.elements = elements;
      s.report = null;
      s.effects = null;
      s.selection = s.selection.filter((id) => existing.has(id));
      s.selectionInfo = null;
      s.selectionNote = null;
      s.suggestions = null;
      s.excluded = s.excluded.filter((id) => existing.has(id));
      s.activePattern = null;
      s.editor = { draft: svgText, error: null, dirty: false };
    });
  }

  acceptReport(report: PatternReport): boolean {
    if (report.revision !== this.state.revision) return false;
    this.update((s) => {
      s.report = report;
      if (
        s.activePattern !== null &&
        s.activePattern >= report.patterns.length
      ) {
        s.activePattern = null;
      }
    });
    return true;
  }

  acceptEffects(effects: EffectsResponse): boolean {
    if (effects.revision !== this.state.revision) return false;
    this.update((s) => {
      s.effects = effects;
    });
    return true;
  }

  acceptSelectionInfo(info: SelectionResponse): boolean {
    if (info.revision !== this.state.revision) return false;
    this.update((s) => {
      s.selectionInfo = info;
      s.selectionNote = null;
    });
    return true;
  }

  acceptSuggestions(suggestions: SuggestionsResponse): boolean {
    if (suggestions.revision !== this.state.revision) return false;
    this.update((s) => {
      s.suggestions = suggestions;
    });
    return true;
  }

  /** Replace the selection; ids not in the current inventory are dropped,
   * duplicates keep their first position. */
  setSelection(ids: string[]): void {
    const existing = new Set(this.state.elements.map((e) => e.id));
    const seen = new Set<string>();
    const cleaned: string[] = [];
    for (const id of ids) {
      if (existing.has(id) && !seen.has(id)) {
        cleaned.push(id);
        seen.add(id);
      }
    }
    this.update((s) => {
      s.selection = cleaned;
      s.selectionInfo = null;
      s.selectionNote = null;
      s.suggestions = null;
    });
  }

  setSelectionNote(note: string): void {
    this.update((s) => {
      s.selectionNote = note;
      s.selectionInfo = null;
    });
  }

  setExcluded(ids: string[]): void {
    this.update((s) => {
      s.excluded = [...ids];
    });
  }

  setActivePattern(index: number | null): void {
    this.update((s) => {
      const count = s.report?.patterns.length ?? 0;
      s.activePattern =
        index !== null && index >= 0 && index < count ? index : null;
    });
  }

  setHistogramOrder(order: HistogramOrder): void {
    this.update((s) => {
      s.histogramOrder = order;
    });
  }

  setEditorDraft(draft: string): void {
    this.update((s) => {
      s.editor.draft = draft;
      s.editor.dirty = draft !== s.lastGoodSvgText;
      s.editor.error = null;
    });
  }

  setEditorError(error: string | null): void {
    this.update((s) => {
      s.editor.error = error;
    });
  }

  resetEditor(): void {
    this.update((s) => {
      s.editor = { draft: s.lastGoodSvgText, error: null, dirty: false };
    });
  }

  setToast(message: string | null): void {
    this.update((s) => {
      s.toast = message;
    });
  }

  setBusy(busy: boolean): void {
    this.update((s) => {
      s.busy = busy;
    });
  }
}
