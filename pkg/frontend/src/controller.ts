/** Orchestrates API calls and the store. Every server mutation carries the
 * revision it was computed against; a 409 means the chart moved underneath
 * us, in which case the controller resyncs to the server's latest revision
 * and tells the user. At most one edit is in flight at a time. */

import { ApiClient, ApiError } from "./api";
import { walkSvg } from "./dompath";
import { Store, type ElementInfo } from "./store";
import type { ApiSuggestion, EditCommand, EditResponse } from "./types";

export const WHOLE_CHART_NOTE = "salience undefined for whole chart";
export const CONFLICT_TOAST =
  "Chart changed on the server — refreshed to the latest revision";

export type InventoryParser = (svgText: string) => ElementInfo[];

/** Default inventory parser: render the SVG off-screen and walk it with the
 * same structural rules the server uses for element ids. */
export function domInventoryParser(svgText: string): ElementInfo[] {
  const parsed = new DOMParser().parseFromString(svgText, "image/svg+xml");
  const root = parsed.documentElement;
  if (!root || root.localName !== "svg") return [];
  return walkSvg(root).map(({ id, kind }) => ({ id, kind }));
}

export class StudioController {
  private editInFlight = false;

  constructor(
    readonly api: ApiClient,
    readonly store: Store,
    private readonly parseInventory: InventoryParser = domInventoryParser,
  ) {}

  private get chartId(): string {
    const id = this.store.state.chartId;
    if (!id) throw new Error("no chart loaded");
    return id;
  }

  async uploadChart(svgText: string): Promise<void> {
    const uploaded = await this.api.uploadChart(svgText);
    this.store.resetChart(
      uploaded.chart_id,
      uploaded.revision,
      svgText,
      this.parseInventory(svgText),
      uploaded.warnings,
    );
    await this.refreshReportAndEffects();
  }

  /** Re-fetch the revision-tagged panels (patterns + histograms). */
  async refreshReportAndEffects(): Promise<void> {
    const [report, effects] = await Promise.all([
      this.api.getPatterns(this.chartId),
      this.api.getEffects(this.chartId),
    ]);
    this.store.acceptReport(report);
    this.store.acceptEffects(effects);
  }

  /** Replace the selection and refresh the live readout, the selection
   * overlays in the histograms, and the suggestion ranking. */
  async select(ids: string[]): Promise<void> {
    this.store.setSelection(ids);
    const selection = this.store.state.selection;
    if (selection.length === 0) return;
    try {
      const info = await this.api.postSelection(this.chartId, selection);
      this.store.acceptSelectionInfo(info);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.store.setSelectionNote(WHOLE_CHART_NOTE);
      } else {
        throw error;
      }
    }
    // The server now knows the selection, so histogram overlays are current.
    this.store.acceptEffects(await this.api.getEffects(this.chartId));
    await this.refreshSuggestions();
  }

  async toggleElement(id: string): Promise<void> {
    const current = this.store.state.selection;
    const next = current.includes(id)
      ? current.filter((existing) => existing !== id)
      : [...current, id];
    await this.select(next);
  }

  /** Batch-select by element type: checking adds every element of the kind,
   * unchecking removes them. */
  async setKindSelected(kind: string, selected: boolean): Promise<void> {
    const ofKind = this.store.state.elements
      .filter((e) => e.kind === kind)
      .map((e) => e.id);
    const current = this.store.state.selection;
    const next = selected
      ? [...current, ...ofKind.filter((id) => !current.includes(id))]
      : current.filter((id) => !ofKind.includes(id));
    await this.select(next);
  }

  async selectPattern(index: number): Promise<void> {
    const pattern = this.store.state.report?.patterns[index];
    if (!pattern) return;
    this.store.setActivePattern(index);
    await this.select([...pattern.elements]);
  }

  private async refreshSuggestions(): Promise<void> {
    const selection = this.store.state.selection;
    if (selection.length === 0) return;
    try {
      const suggestions = await this.api.postSuggestions(
        this.chartId,
        selection,
      );
      this.store.acceptSuggestions(suggestions);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) return;
      throw error;
    }
  }

  /** Change which elements the perception scope excludes (legends etc.).
   * The server re-reports immediately at the same revision. */
  async setExcluded(excluded: string[]): Promise<void> {
    const report = await this.api.putScope(this.chartId, excluded);
    this.store.setExcluded(excluded);
    this.store.acceptReport(report);
    this.store.acceptEffects(await this.api.getEffects(this.chartId));
    const scoped = new Set(report.scope);
    const kept = this.store.state.selection.filter((id) => scoped.has(id));
    if (kept.length !== this.store.state.selection.length) {
      await this.select(kept);
    } else if (kept.length > 0) {
      // Same ids, new scope: the salience context changed, so re-read.
      await this.select(kept);
    }
  }

  async excludeFromScope(ids: string[]): Promise<void> {
    const merged = new Set([...this.store.state.excluded, ...ids]);
    await this.setExcluded([...merged]);
  }

  async includeInScope(ids: string[]): Promise<void> {
    const drop = new Set(ids);
    await this.setExcluded(
      this.store.state.excluded.filter((id) => !drop.has(id)),
    );
  }

  /** Apply a suggestion. Untouched suggestions go through the server-side
   * cache (one atomic revision bump); a value-tweaked suggestion is applied
   * as its individual edit commands carrying the tweaked values. */
  async applySuggestion(
    suggestion: ApiSuggestion,
    tweakedCommands?: EditCommand[],
  ): Promise<void> {
    await this.runEdit(async () => {
      if (!tweakedCommands) {
        return await this.api.applySuggestion(
          this.chartId,
          this.store.state.revision,
          suggestion.suggestion_id,
        );
      }
      let revision = this.store.state.revision;
      let last: EditResponse | null = null;
      for (const command of tweakedCommands) {
        last = await this.api.applyEditCommand(this.chartId, revision, command);
        revision = last.new_revision;
      }
      if (!last) throw new Error("suggestion has no edit commands");
      return last;
    });
  }

  /** Save the editor text as a full-document replacement. A parse failure is
   * surfaced inline and changes nothing. */
  async saveEditor(): Promise<void> {
    const draft = this.store.state.editor.draft;
    try {
      await this.runEdit(() =>
        this.api.replaceSvg(this.chartId, this.store.state.revision, draft),
      );
    } catch (error) {
      if (error instanceof ApiError && error.status === 400) {
        this.store.setEditorError(error.message);
        return;
      }
      throw error;
    }
  }

  resetEditor(): void {
    this.store.resetEditor();
  }

  /** Run one edit request, then move the UI to the new revision and refresh
   * every panel from it. Stale-revision conflicts resync instead. */
  private async runEdit(
    edit: () => Promise<EditResponse>,
  ): Promise<void> {
    if (this.editInFlight) return;
    this.editInFlight = true;
    this.store.setBusy(true);
    try {
      const response = await edit();
      const priorSelection = this.store.state.selection;
      const priorExcluded = this.store.state.excluded;
      this.store.advanceRevision(
        response.new_revision,
        response.svg,
        this.parseInventory(response.svg),
      );
      await this.restorePanels(priorSelection, priorExcluded);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await this.resyncAfterConflict();
        return;
      }
      throw error;
    } finally {
      this.editInFlight = false;
      this.store.setBusy(false);
    }
  }

  /** After a revision change: re-apply scope exclusions that still exist,
   * re-report, and restore whatever part of the selection survived. */
  private async restorePanels(
    selection: string[],
    excluded: string[],
  ): Promise<void> {
    const existing = new Set(this.store.state.elements.map((e) => e.id));
    const keptExcluded = excluded.filter((id) => existing.has(id));
    if (keptExcluded.length > 0) {
      const report = await this.api.putScope(this.chartId, keptExcluded);
      this.store.setExcluded(keptExcluded);
      this.store.acceptReport(report);
      this.store.acceptEffects(await this.api.getEffects(this.chartId));
    } else {
      await this.refreshReportAndEffects();
    }
    const keptSelection = selection.filter((id) => existing.has(id));
    if (keptSelection.length > 0) await this.select(keptSelection);
  }

  private async resyncAfterConflict(): Promise<void> {
    this.store.setToast(CONFLICT_TOAST);
    const { svg, revision } = await this.api.getSvg(this.chartId);
    const priorSelection = this.store.state.selection;
    const priorExcluded = this.store.state.excluded;
    this.store.advanceRevision(revision, svg, this.parseInventory(svg));
    await this.restorePanels(priorSelection, priorExcluded);
  }
}
