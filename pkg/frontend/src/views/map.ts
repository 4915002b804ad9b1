/**
 * Diachronic country map.
 *
 * Period sliders drive the activity endpoint through a debounce so a drag
 * settles into exactly one request. The role toggle switches between the
 * authored and studied counts of the same payload without refetching. A
 * side panel shows the country classification for the current role and k.
 */

import type { ActivityPayload, ApiClient, ClassesPayload } from "../api";
import { debounce } from "../debounce";
import { GRID_COLS, WORLD_CELLS, cellFor } from "../boundaries";
import type { Role } from "../state";
import type { StateStore } from "../store";

export const ACTIVITY_DEBOUNCE_MS = 250;

type MapApi = Pick<ApiClient, "activity" | "classes">;

export class MapView {
  private payload: ActivityPayload | null = null;
  private classes: ClassesPayload | null = null;
  private fromInput!: HTMLInputElement;
  private toInput!: HTMLInputElement;
  private periodLabel!: HTMLElement;
  private mapEl!: HTMLElement;
  private legendEl!: HTMLElement;
  private classesEl!: HTMLElement;
  private debouncedLoad: () => void;

  constructor(
    private root: HTMLElement,
    private api: MapApi,
    private store: StateStore,
    private yearRange: { from: number; to: number },
  ) {
    this.debouncedLoad = debounce(() => void this.loadActivity(), ACTIVITY_DEBOUNCE_MS);
  }

  mount(): void {
    const state = this.store.get();
    this.root.innerHTML = `
      <div class="controls">
        <label>From <input type="range" class="from"
          min="${this.yearRange.from}" max="${this.yearRange.to}" value="${state.from}"></label>
        <label>To <input type="range" class="to"
          min="${this.yearRange.from}" max="${this.yearRange.to}" value="${state.to}"></label>
        <span class="period-label"></span>
        <span class="role-toggle">
          <label><input type="radio" name="role" value="studied"> studied</label>
          <label><input type="radio" name="role" value="authored"> authored</label>
        </span>
        <label>classes k <input type="number" class="classes-k" min="1" value="${state.classesK}"></label>
      </div>
      <div class="map-grid"></div>
      <div class="map-panels">
        <div class="legend"></div>
        <div class="classes"></div>
      </div>`;
    this.fromInput = this.root.querySelector<HTMLInputElement>("input.from")!;
    this.toInput = this.root.querySelector<HTMLInputElement>("input.to")!;
    this.periodLabel = this.root.querySelector<HTMLElement>(".period-label")!;
    this.mapEl = this.root.querySelector<HTMLElement>(".map-grid")!;
    this.legendEl = this.root.querySelector<HTMLElement>(".legend")!;
    this.classesEl = this.root.querySelector<HTMLElement>(".classes")!;

    this.fromInput.addEventListener("input", () => this.onPeriodInput());
    this.toInput.addEventListener("input", () => this.onPeriodInput());
    for (const radio of this.root.querySelectorAll<HTMLInputElement>("input[name=role]")) {
      radio.checked = radio.value === state.role;
      radio.addEventListener("change", () => this.onRoleChange(radio.value as Role));
    }
    const kInput = this.root.querySelector<HTMLInputElement>("input.classes-k")!;
    kInput.addEventListener("change", () => {
      const k = Math.max(1, parseInt(kInput.value, 10) || 1);
      this.store.patch({ classesK: k });
      void this.loadClasses();
    });

    this.updatePeriodLabel();
    void this.loadActivity();
    void this.loadClasses();
  }

  private onPeriodInput(): void {
    let from = parseInt(this.fromInput.value, 10);
    let to = parseInt(this.toInput.value, 10);
    if (from > to) [from, to] = [to, from];
    this.store.patch({ from, to });
    this.updatePeriodLabel();
    this.debouncedLoad();
  }

  private onRoleChange(role: Role): void {
    this.store.patch({ role });
    // both roles arrive in one activity payload; redraw, no refetch
    this.renderActivity();
    void this.loadClasses();
  }

  private updatePeriodLabel(): void {
    const state = this.store.get();
    this.periodLabel.textContent = `${state.from}–${state.to}`;
  }

  private async loadActivity(): Promise<void> {
    const state = this.store.get();
    try {
      this.payload = await this.api.activity(state.from, state.to);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.mapEl.textContent = `activity request failed: ${(err as Error).message}`;
      return;
    }
    this.renderActivity();
  }

  private async loadClasses(): Promise<void> {
    const state = this.store.get();
    try {
      this.classes = await this.api.classes(state.classesK, state.role);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.classesEl.textContent = `classes request failed: ${(err as Error).message}`;
      return;
    }
    this.renderClasses();
  }

  private counts(): Record<string, number> {
    if (!this.payload) return {};
    return this.store.get().role === "authored"
      ? this.payload.authored
      : this.payload.studied;
  }

  private renderActivity(): void {
    if (!this.payload) return;
    const counts = this.counts();
    const max = Math.max(1, ...Object.values(counts));
    this.mapEl.innerHTML = "";
    this.mapEl.style.gridTemplateColumns = `repeat(${GRID_COLS}, 1fr)`;
    for (const cell of WORLD_CELLS) {
      const count = counts[cell.code] ?? 0;
      const tile = document.createElement("div");
      tile.className = "tile" + (count > 0 ? " active" : "");
      tile.style.gridColumn = String(cell.col + 1);
      tile.style.gridRow = String(cell.row + 1);
      tile.style.setProperty("--heat", (count / max).toFixed(3));
      tile.title = `${cell.name}: ${count}`;
      tile.textContent = cell.code;
      this.mapEl.appendChild(tile);
    }
    // payload codes without a cell still get shown, in an overflow strip
    const orphans = Object.keys(counts)
      .filter((code) => !cellFor(code))
      .sort();
    for (const [i, code] of orphans.entries()) {
      const tile = document.createElement("div");
      tile.className = "tile active orphan";
      tile.style.gridColumn = String((i % GRID_COLS) + 1);
      tile.style.gridRow = String(13 + Math.floor(i / GRID_COLS));
      tile.style.setProperty("--heat", (counts[code] / max).toFixed(3));
      tile.title = `${code}: ${counts[code]}`;
      tile.textContent = code;
      this.mapEl.appendChild(tile);
    }
    this.renderLegend(counts);
  }

  private renderLegend(counts: Record<string, number>): void {
    const state = this.store.get();
    const rows = Object.entries(counts).sort(
      (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
    );
    const items = rows
      .map(
        ([code, count]) =>
          `<li><span class="code">${code}</span><span class="count">${count}</span></li>`,
      )
      .join("");
    this.legendEl.innerHTML = `
      <h3>${state.role} · ${state.from}–${state.to}</h3>
      <ul>${items || "<li>no papers in this period</li>"}</ul>`;
  }

  private renderClasses(): void {
    if (!this.classes) return;
    const { countries, assignment, labels, columns } = this.classes;
    const rows = countries
      .map((code, i) => {
        const flags = labels[i]
          .map((label, j) => (label === "neutral" ? "" : `${columns[j]}:${label}`))
          .filter(Boolean)
          .join(" ");
        return `<tr><td>${code}</td><td>class ${assignment[code]}</td><td>${flags}</td></tr>`;
      })
      .join("");
    this.classesEl.innerHTML = `
      <h3>country classes (k=${this.classes.k}, ${this.classes.role})</h3>
      <table>${rows}</table>`;
  }
}
