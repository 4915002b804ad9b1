/**
 * Typed client for the analysis service.
 *
 * The client performs no analysis of its own: every number shown in the UI
 * comes out of one of these payloads. Each endpoint is a cancellation
 * channel; starting a request aborts the previous in-flight request on the
 * same channel, so a stale response can never overwrite a newer one.
 */

import type { Role } from "./state";

export interface SummaryPayload {
  papers: number;
  years: [number, number] | null;
  keywords: number;
}

export interface ActivityPayload {
  period: { from: number; to: number };
  authored: Record<string, number>;
  studied: Record<string, number>;
}

export interface ClassesPayload {
  role: string;
  k: number;
  countries: string[];
  columns: string[];
  counts: number[][];
  assignment: Record<string, number>;
  residuals: number[][];
  labels: string[][];
  merges: [number, number, number][];
  excluded_countries: string[];
  excluded_columns: string[];
}

export interface NetworkNode {
  id: string;
  frequency: number;
  community: number;
  x: number;
  y: number;
}

export interface NetworkEdge {
  source: string;
  target: string;
  weight: number;
}

export interface NetworkPayload {
  level: number;
  max_level: number;
  modularity: number | null;
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface CloudTerm {
  term: string;
  frequency: number;
  /** Relative size in (0, 1]; rendered font size is linear in this. */
  size: number;
}

export interface ThemeCloud {
  id: number;
  doc_count: number;
  color_rank: number;
  top_terms: CloudTerm[];
}

export interface ThemesPayload {
  k: number;
  seed: number;
  themes: ThemeCloud[];
}

export interface ErrorBody {
  error: { code: string; message: string; param?: string };
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly param?: string,
  ) {
    super(message);
  }
}

/** The service's classes endpoint names the author side "affiliation". */
function classesRole(role: Role): string {
  return role === "authored" ? "affiliation" : "studied";
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private baseUrl = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async get<T>(channel: string, path: string): Promise<T> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);
    try {
      const response = await this.fetchFn(`${this.baseUrl}${path}`, {
        signal: controller.signal,
      });
      const body = (await response.json()) as T | ErrorBody;
      if (!response.ok) {
        const err = (body as ErrorBody).error;
        throw new ApiError(
          err?.code ?? "http_error",
          err?.message ?? `HTTP ${response.status}`,
          err?.param,
        );
      }
      return body as T;
    } finally {
      if (this.inflight.get(channel) === controller) {
        this.inflight.delete(channel);
      }
    }
  }

  summary(): Promise<SummaryPayload> {
    return this.get("summary", "/api/summary");
  }

  activity(from: number, to: number): Promise<ActivityPayload> {
    return this.get("activity", `/api/geo/activity?from=${from}&to=${to}`);
  }

  classes(k: number, role: Role): Promise<ClassesPayload> {
    return this.get("classes", `/api/geo/classes?k=${k}&role=${classesRole(role)}`);
  }

  network(minWeight: number, level: number | null): Promise<NetworkPayload> {
    const levelPart = level === null ? "" : `&level=${level}`;
    return this.get("network", `/api/network?minWeight=${minWeight}${levelPart}`);
  }

  themes(k: number, top: number): Promise<ThemesPayload> {
    return this.get("themes", `/api/themes?k=${k}&top=${top}`);
  }

  cloud(themeId: number, k: number, top: number): Promise<ThemeCloud> {
    return this.get("cloud", `/api/themes/${themeId}/cloud?k=${k}&top=${top}`);
  }
}
