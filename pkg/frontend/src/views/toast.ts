/** Transient notification strip (conflict refreshes etc.). */

import { el } from "../dom";
import type { Store } from "../store";

const TOAST_MS = 6000;

export class ToastView {
  private box: HTMLElement;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    root: HTMLElement,
    private readonly store: Store,
  ) {
    this.box = el("div", { class: "toast", role: "status" });
    root.append(this.box);
    store.subscribe(() => this.render());
    this.render();
  }

  private render(): void {
    const message = this.store.state.toast;
    this.box.textContent = message ?? "";
    this.box.classList.toggle("visible", message !== null);
    if (message !== null) {
      if (this.timer) clearTimeout(this.timer);
      this.timer = setTimeout(() => this.store.setToast(null), TOAST_MS);
    }
  }
}
