/**
 * Zoomable keyword-network explorer.
 *
 * The wheel changes a zoom factor; the factor maps onto a hierarchy level
 * (coarse when zoomed out, fine when zoomed in) and a level change refetches
 * the network at that granularity. Node positions, communities, and the
 * modularity readout all come straight from the payload.
 */

import type { ApiClient, NetworkPayload } from "../api";
import type { StateStore } from "../store";
import { ZOOM_MIN, clampZoom, zoomToLevel } from "../zoom";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 640;
const MARGIN = 30;
const PALETTE = [
  "#33658a", "#f26419", "#2a9d8f", "#e9c46a", "#9b5de5",
  "#f15bb5", "#6a994e", "#bc4749", "#577590", "#f4a261",
];

type NetworkApi = Pick<ApiClient, "network">;

export class NetworkView {
  private zoomFactor = ZOOM_MIN;
  private payload: NetworkPayload | null = null;
  private statusEl!: HTMLElement;
  private svgHost!: HTMLElement;

  constructor(
    private root: HTMLElement,
    private api: NetworkApi,
    private store: StateStore,
  ) {}

  mount(): void {
    const state = this.store.get();
    this.root.innerHTML = `
      <div class="controls">
        <label>min weight <input type="number" class="min-weight" min="1"
          value="${state.minWeight}"></label>
        <span class="status"></span>
        <span class="hint">scroll over the graph to change granularity</span>
      </div>
      <div class="svg-host"></div>`;
    this.statusEl = this.root.querySelector<HTMLElement>(".status")!;
    this.svgHost = this.root.querySelector<HTMLElement>(".svg-host")!;

    const weightInput = this.root.querySelector<HTMLInputElement>("input.min-weight")!;
    weightInput.addEventListener("change", () => {
      const minWeight = Math.max(1, parseInt(weightInput.value, 10) || 1);
      this.store.patch({ minWeight });
      void this.load();
    });
    this.svgHost.addEventListener("wheel", (event) => this.onWheel(event), {
      passive: false,
    });
    void this.load();
  }

  private onWheel(event: WheelEvent): void {
    event.preventDefault();
    if (!this.payload) return;
    this.zoomFactor = clampZoom(this.zoomFactor * (event.deltaY < 0 ? 1.25 : 0.8));
    const level = zoomToLevel(this.zoomFactor, this.payload.max_level);
    if (level !== this.payload.level) {
      this.store.patch({ level });
      void this.load();
    }
  }

  private async load(): Promise<void> {
    const state = this.store.get();
    try {
      this.payload = await this.api.network(state.minWeight, state.level);
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.svgHost.textContent = `network request failed: ${(err as Error).message}`;
      return;
    }
    this.render();
  }

  private render(): void {
    if (!this.payload) return;
    const { nodes, edges, level, max_level, modularity } = this.payload;
    const q = modularity === null ? "—" : modularity.toFixed(4);
    this.statusEl.textContent =
      `level ${level} of ${max_level} · ${nodes.length} keywords · Q=${q}`;

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
    const span = SIZE - 2 * MARGIN;
    const px = (v: number) => MARGIN + v * span;
    const byId = new Map(nodes.map((n) => [n.id, n]));
    const maxWeight = Math.max(1, ...edges.map((e) => e.weight));
    const maxFrequency = Math.max(1, ...nodes.map((n) => n.frequency));

    for (const edge of edges) {
      const a = byId.get(edge.source)!;
      const b = byId.get(edge.target)!;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", px(a.x).toFixed(1));
      line.setAttribute("y1", px(a.y).toFixed(1));
      line.setAttribute("x2", px(b.x).toFixed(1));
      line.setAttribute("y2", px(b.y).toFixed(1));
      line.setAttribute("class", "edge");
      line.setAttribute("stroke-width", (0.5 + 2.5 * (edge.weight / maxWeight)).toFixed(2));
      svg.appendChild(line);
    }
    for (const node of nodes) {
      const g = document.createElementNS(SVG_NS, "g");
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", px(node.x).toFixed(1));
      circle.setAttribute("cy", px(node.y).toFixed(1));
      circle.setAttribute(
        "r",
        (4 + 10 * Math.sqrt(node.frequency / maxFrequency)).toFixed(1),
      );
      circle.setAttribute("fill", PALETTE[node.community % PALETTE.length]);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent =
        `${node.id} · ${node.frequency} document(s) · community ${node.community}`;
      circle.appendChild(title);
      g.appendChild(circle);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", px(node.x).toFixed(1));
      text.setAttribute("y", (px(node.y) - 8).toFixed(1));
      text.textContent = node.id;
      g.appendChild(text);
      svg.appendChild(g);
    }
    this.svgHost.innerHTML = "";
    this.svgHost.appendChild(svg);
  }
}
