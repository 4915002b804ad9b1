import { describe, expect, it } from "vitest";

import {
  DEFAULTS,
  defaultState,
  queryToState,
  stateToQuery,
  type Role,
  type View,
  type ViewState,
} from "../src/state";

/** Deterministic PRNG so the sweep is reproducible across runs. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function intBetween(rand: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rand() * (hi - lo + 1));
}

function pick<T>(rand: () => number, options: readonly T[]): T {
  return options[Math.floor(rand() * options.length)];
}

const VIEWS: readonly View[] = ["map", "network", "themes"];
const ROLES: readonly Role[] = ["authored", "studied"];

function randomState(rand: () => number): ViewState {
  const a = intBetween(rand, 1900, 2030);
  const b = intBetween(rand, 1900, 2030);
  return {
    view: pick(rand, VIEWS),
    from: Math.min(a, b),
    to: Math.max(a, b),
    role: pick(rand, ROLES),
    classesK: intBetween(rand, 1, 12),
    minWeight: intBetween(rand, 1, 9),
    level: rand() < 0.4 ? null : intBetween(rand, 0, 6),
    themesK: intBetween(rand, 1, 40),
    theme: rand() < 0.4 ? null : intBetween(rand, 0, 39),
  };
}

describe("stateToQuery", () => {
  it("serializes the default state to the canonical short form", () => {
    expect(stateToQuery(defaultState(1996, 2015))).toBe(
      "view=map&from=1996&to=2015&role=studied",
    );
  });

  it("keeps a fixed key order regardless of which fields are set", () => {
    const state: ViewState = {
      view: "network",
      from: 2000,
      to: 2005,
      role: "authored",
      classesK: 4,
      minWeight: 3,
      level: 1,
      themesK: 7,
      theme: 2,
    };
    expect(stateToQuery(state)).toBe(
      "view=network&from=2000&to=2005&role=authored&k=4&minWeight=3&level=1&themesK=7&theme=2",
    );
  });

  it("omits fields still at their defaults", () => {
    const state = { ...defaultState(2000, 2005), view: "themes" as View };
    expect(stateToQuery(state)).toBe("view=themes&from=2000&to=2005&role=studied");
    expect(stateToQuery(state)).toContain("from=2000&to=2005");
  });
});

describe("queryToState", () => {
  const years = { from: 1990, to: 2020 };

  it("round-trips 1000 random states losslessly", () => {
    const rand = mulberry32(20240901);
    for (let trial = 0; trial < 1000; trial++) {
      const state = randomState(rand);
      // distinct fallback years prove the parse reads the query, not them
      expect(queryToState(stateToQuery(state), years)).toEqual(state);
    }
  });

  it("fills a missing period from the corpus year range", () => {
    const state = queryToState("view=map", years);
    expect(state.from).toBe(1990);
    expect(state.to).toBe(2020);
  });

  it("accepts a leading question mark", () => {
    expect(queryToState("?view=network", years).view).toBe("network");
  });

  it("swaps an inverted period", () => {
    const state = queryToState("from=2010&to=2001", years);
    expect(state.from).toBe(2001);
    expect(state.to).toBe(2010);
  });

  it("falls back to defaults on junk values", () => {
    const state = queryToState(
      "view=pie&from=abc&role=editor&k=0&minWeight=-2&level=x&themesK=zero&theme=-1",
      years,
    );
    expect(state).toEqual(defaultState(1990, 2020));
  });

  it("ignores unknown keys", () => {
    const state = queryToState("view=themes&order=asc&foo=1", years);
    expect(state.view).toBe("themes");
    expect(state.themesK).toBe(DEFAULTS.themesK);
  });
});
