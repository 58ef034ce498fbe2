/** Boot: wire the store, API client, controller, and the five panels. */

import { ApiClient } from "./api";
import { StudioController } from "./controller";
import { Store } from "./store";
import { el } from "./dom";
import { AdvisorView } from "./views/advisor";
import { EditorView } from "./views/editor";
import { EffectsView } from "./views/effects";
import { ElementsView } from "./views/elements";
import { PatternsView } from "./views/patterns";
import { ToastView } from "./views/toast";

function mount(): void {
  const store = new Store();
  const controller = new StudioController(new ApiClient(), store);

  const pick = (id: string): HTMLElement => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing mount point #${id}`);
    return node;
  };

  new EditorView(pick("editor-panel"), store, controller);
  new ElementsView(pick("elements-panel"), store, controller);
  new PatternsView(pick("patterns-panel"), store, controller);
  new EffectsView(pick("effects-panel"), store);
  new AdvisorView(pick("advisor-panel"), store, controller);
  new ToastView(pick("toast-root"), store);

  const fileInput = document.getElementById("chart-file") as HTMLInputElement;
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void file.text().then(async (svgText) => {
      try {
        await controller.uploadChart(svgText);
      } catch (error) {
        store.setToast(
          error instanceof Error ? error.message : "upload failed",
        );
      }
    });
  });

  const header = document.getElementById("app-header");
  header?.append(
    el("span", { class: "muted header-hint" }, "open an SVG chart to begin"),
  );
}

mount();
