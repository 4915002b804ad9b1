import type { ViewState } from "./state";

/** Mutable state holder; the app's implementation mirrors it into the URL. */
export interface StateStore {
  get(): ViewState;
  patch(partial: Partial<ViewState>): void;
}

export class MemoryStore implements StateStore {
  constructor(private state: ViewState) {}

  get(): ViewState {
    return this.state;
  }

  patch(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
  }
}
