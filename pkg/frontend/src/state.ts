/**
 * Shareable view state.
 *
 * Every state serializes to a URL query string and parses back losslessly,
 * so any exploration can be bookmarked or pasted into chat. Serialization
 * uses a fixed key order and omits fields still at their defaults; `view`,
 * `from`, `to`, and `role` are always present.
 */

export type View = "map" | "network" | "themes";
export type Role = "authored" | "studied";

export interface ViewState {
  view: View;
  /** Period start, inclusive. */
  from: number;
  /** Period end, inclusive; never below `from` in a valid state. */
  to: number;
  /** Which country attachment the map and classes read. */
  role: Role;
  /** Number of country classes. */
  classesK: number;
  /** Minimum co-occurrence weight kept in the network. */
  minWeight: number;
  /** Hierarchy cut level; null means coarsest (service default). */
  level: number | null;
  /** Number of themes. */
  themesK: number;
  /** Selected theme id; null means none. */
  theme: number | null;
}

export const DEFAULTS = {
  view: "map" as View,
  role: "studied" as Role,
  classesK: 2,
  minWeight: 1,
  level: null as number | null,
  themesK: 10,
  theme: null as number | null,
};

export function defaultState(from: number, to: number): ViewState {
  return { ...DEFAULTS, from, to };
}

export function stateToQuery(state: ViewState): string {
  const pairs: [string, string][] = [
    ["view", state.view],
    ["from", String(state.from)],
    ["to", String(state.to)],
    ["role", state.role],
  ];
  if (state.classesK !== DEFAULTS.classesK) {
    pairs.push(["k", String(state.classesK)]);
  }
  if (state.minWeight !== DEFAULTS.minWeight) {
    pairs.push(["minWeight", String(state.minWeight)]);
  }
  if (state.level !== null) {
    pairs.push(["level", String(state.level)]);
  }
  if (state.themesK !== DEFAULTS.themesK) {
    pairs.push(["themesK", String(state.themesK)]);
  }
  if (state.theme !== null) {
    pairs.push(["theme", String(state.theme)]);
  }
  return pairs.map(([key, value]) => `${key}=${value}`).join("&");
}

function intOr(raw: string | null, fallback: number): number {
  if (raw === null || !/^-?\d+$/.test(raw)) return fallback;
  return parseInt(raw, 10);
}

function positiveIntOr(raw: string | null, fallback: number): number {
  const value = intOr(raw, fallback);
  return value >= 1 ? value : fallback;
}

function indexOrNull(raw: string | null): number | null {
  const value = intOr(raw, -1);
  return value >= 0 ? value : null;
}

/**
 * Parse a query string back into a state. Unknown keys and malformed
 * values fall back to defaults instead of erroring, so hand-edited URLs
 * degrade gracefully; `years` supplies the corpus range for a missing
 * period. Inverted periods are swapped.
 */
export function queryToState(
  query: string,
  years: { from: number; to: number },
): ViewState {
  const params = new URLSearchParams(
    query.startsWith("?") ? query.slice(1) : query,
  );
  const rawView = params.get("view");
  const rawRole = params.get("role");
  let from = intOr(params.get("from"), years.from);
  let to = intOr(params.get("to"), years.to);
  if (from > to) [from, to] = [to, from];
  return {
    view:
      rawView === "map" || rawView === "network" || rawView === "themes"
        ? rawView
        : DEFAULTS.view,
    from,
    to,
    role: rawRole === "authored" || rawRole === "studied" ? rawRole : DEFAULTS.role,
    classesK: positiveIntOr(params.get("k"), DEFAULTS.classesK),
    minWeight: positiveIntOr(params.get("minWeight"), DEFAULTS.minWeight),
    level: indexOrNull(params.get("level")),
    themesK: positiveIntOr(params.get("themesK"), DEFAULTS.themesK),
    theme: indexOrNull(params.get("theme")),
  };
}
