import { ApiClient } from "./api";
import { queryToState, stateToQuery } from "./state";
import type { View, ViewState } from "./state";
import type { StateStore } from "./store";
import { MapView } from "./views/map";
import { NetworkView } from "./views/network";
import { ThemesView } from "./views/themes";
import "./style.css";

/** Store that mirrors every change into the address bar. */
class UrlStore implements StateStore {
  constructor(private state: ViewState) {
    this.sync();
  }

  get(): ViewState {
    return this.state;
  }

  patch(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    this.sync();
  }

  private sync(): void {
    history.replaceState(null, "", `?${stateToQuery(this.state)}`);
  }
}

async function boot(): Promise<void> {
  const app = document.getElementById("app")!;
  const api = new ApiClient();

  let summary;
  try {
    summary = await api.summary();
  } catch (err) {
    app.innerHTML = `<p class="boot-error">service unreachable: ${(err as Error).message}</p>`;
    return;
  }
  const years = summary.years ?? [0, 0];
  const yearRange = { from: years[0], to: years[1] };
  const store = new UrlStore(queryToState(location.search, yearRange));

  app.innerHTML = `
    <header>
      <h1>biblionet</h1>
      <span class="summary">${summary.papers} paper(s) · ${years[0]}–${years[1]}
        · ${summary.keywords} keyword(s)</span>
      <nav>
        <button data-view="map">map</button>
        <button data-view="network">network</button>
        <button data-view="themes">themes</button>
      </nav>
    </header>
    <main id="view-root"></main>`;
  const viewRoot = document.getElementById("view-root")!;
  const tabs = [...app.querySelectorAll<HTMLButtonElement>("nav button")];

  const show = (view: View): void => {
    store.patch({ view });
    for (const tab of tabs) tab.classList.toggle("current", tab.dataset.view === view);
    viewRoot.innerHTML = "";
    if (view === "map") new MapView(viewRoot, api, store, yearRange).mount();
    else if (view === "network") new NetworkView(viewRoot, api, store).mount();
    else new ThemesView(viewRoot, api, store).mount();
  };

  for (const tab of tabs) {
    tab.addEventListener("click", () => show(tab.dataset.view as View));
  }
  show(store.get().view);
}

void boot();
