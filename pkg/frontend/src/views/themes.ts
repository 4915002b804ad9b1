/**
 * Theme word-cloud browser.
 *
 * Renders one cloud card per theme; term font sizes are linear in the
 * payload's `size` field. Clicking a card selects the theme and loads a
 * larger cloud for it through the single-theme endpoint.
 */

import type { ApiClient, ThemeCloud, ThemesPayload } from "../api";
import type { StateStore } from "../store";

const FONT_MIN_PX = 9;
const FONT_SPAN_PX = 19;
const CARD_TERMS = 30;
const DETAIL_TERMS = 60;

type ThemesApi = Pick<ApiClient, "themes" | "cloud">;

export function termFontPx(size: number): number {
  return FONT_MIN_PX + FONT_SPAN_PX * size;
}

export class ThemesView {
  private payload: ThemesPayload | null = null;
  private gridEl!: HTMLElement;
  private detailEl!: HTMLElement;

  constructor(
    private root: HTMLElement,
    private api: ThemesApi,
    private store: StateStore,
  ) {}

  mount(): void {
    const state = this.store.get();
    this.root.innerHTML = `
      <div class="controls">
        <label>themes k <input type="number" class="themes-k" min="1"
          value="${state.themesK}"></label>
        <span class="hint">click a cloud for detail</span>
      </div>
      <div class="cloud-grid"></div>
      <div class="cloud-detail"></div>`;
    this.gridEl = this.root.querySelector<HTMLElement>(".cloud-grid")!;
    this.detailEl = this.root.querySelector<HTMLElement>(".cloud-detail")!;

    const kInput = this.root.querySelector<HTMLInputElement>("input.themes-k")!;
    kInput.addEventListener("change", () => {
      const themesK = Math.max(1, parseInt(kInput.value, 10) || 1);
      this.store.patch({ themesK, theme: null });
      this.detailEl.innerHTML = "";
      void this.load();
    });
    void this.load();
    if (state.theme !== null) void this.loadDetail(state.theme);
  }

  private async load(): Promise<void> {
    const state = this.store.get();
    try {
      this.payload = await this.api.themes(state.themesK, CARD_TERMS);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.gridEl.textContent = `themes request failed: ${(err as Error).message}`;
      return;
    }
    this.render();
  }

  private async loadDetail(themeId: number): Promise<void> {
    const state = this.store.get();
    let cloud: ThemeCloud;
    try {
      cloud = await this.api.cloud(themeId, state.themesK, DETAIL_TERMS);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.detailEl.textContent = `cloud request failed: ${(err as Error).message}`;
      return;
    }
    this.detailEl.innerHTML = `
      <h3>theme ${cloud.id} · ${cloud.doc_count} document(s)</h3>
      <p class="cloud large">${cloudMarkup(cloud)}</p>`;
  }

  private render(): void {
    if (!this.payload) return;
    const selected = this.store.get().theme;
    this.gridEl.innerHTML = "";
    for (const theme of this.payload.themes) {
      const card = document.createElement("div");
      card.className = "cloud-card" + (theme.id === selected ? " selected" : "");
      card.innerHTML = `
        <h4>theme ${theme.id} · ${theme.doc_count} document(s)</h4>
        <p class="cloud">${cloudMarkup(theme)}</p>`;
      card.addEventListener("click", () => {
        this.store.patch({ theme: theme.id });
        this.render();
        void this.loadDetail(theme.id);
      });
      this.gridEl.appendChild(card);
    }
  }
}

function cloudMarkup(cloud: ThemeCloud): string {
  return cloud.top_terms
    .map(
      (term) =>
        `<span style="font-size:${termFontPx(term.size).toFixed(1)}px"
          title="${term.frequency} occurrence(s)">${term.term}</span>`,
    )
    .join(" ");
}
