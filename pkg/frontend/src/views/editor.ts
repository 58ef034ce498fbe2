/** SVG editor panel: raw chart text with search/replace, reset to the
 * last-good revision, and save-as-replacement. A save that fails to parse on
 * the server shows the parse error inline and leaves every panel unchanged. */

import { el } from "../dom";
import type { StudioController } from "../controller";
import type { Store } from "../store";

export class EditorView {
  private textarea: HTMLTextAreaElement;
  private searchInput: HTMLInputElement;
  private replaceInput: HTMLInputElement;
  private errorBox: HTMLElement;
  private revisionLabel: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly store: Store,
    private readonly controller: StudioController,
  ) {
    this.textarea = el("textarea", {
      class: "editor-text",
      spellcheck: "false",
      oninput: () => this.store.setEditorDraft(this.textarea.value),
    });
    this.searchInput = el("input", {
      class: "editor-search",
      placeholder: "search",
    });
    this.replaceInput = el("input", {
      class: "editor-replace",
      placeholder: "replace with",
    });
    this.errorBox = el("div", { class: "editor-error", role: "alert" });
    this.revisionLabel = el("span", { class: "editor-revision" });

    const replaceAll = el(
      "button",
      { class: "editor-replace-all", onclick: () => this.replaceAll() },
      "Replace all",
    );
    const reset = el(
      "button",
      { class: "editor-reset", onclick: () => this.controller.resetEditor() },
      "Reset",
    );
    const save = el(
      "button",
      {
        class: "editor-save",
        onclick: () => {
          void this.controller.saveEditor();
        },
      },
      "Save",
    );

    root.append(
      el(
        "div",
        { class: "panel-title" },
        "SVG source ",
        this.revisionLabel,
      ),
      el(
        "div",
        { class: "editor-toolbar" },
        this.searchInput,
        this.replaceInput,
        replaceAll,
        reset,
        save,
      ),
      this.textarea,
      this.errorBox,
    );
    store.subscribe(() => this.render());
    this.render();
  }

  private replaceAll(): void {
    const needle = this.searchInput.value;
    if (!needle) return;
    const draft = this.store.state.editor.draft.split(needle).join(
      this.replaceInput.value,
    );
    this.store.setEditorDraft(draft);
  }

  private render(): void {
    const { editor, revision, chartId } = this.store.state;
    if (this.textarea.value !== editor.draft) {
      this.textarea.value = editor.draft;
    }
    this.textarea.disabled = chartId === null;
    this.revisionLabel.textContent = chartId ? `revision ${revision}` : "";
    this.errorBox.textContent = editor.error ?? "";
    this.errorBox.style.display = editor.error ? "block" : "none";
  }
}
