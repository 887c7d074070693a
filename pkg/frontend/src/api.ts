/** Typed client for the tagpolicy HTTP API.
 *
 * Every number the server computes exactly (similarities, deltas) stays
 * in the shape the server sent it; similarity strings like "5/6" are
 * passed through verbatim and never parsed into floats.
 */

export interface DatasetSummary {
  tags: string[];
  targets: string[];
  rows: number;
}

export interface NeighborDoc {
  row: number;
  scenario: string[];
  decision: string;
  similarity: string;
}

export interface PredictionDoc {
  query: string[];
  decision: string;
  decision_bit: number;
  provenance: string;
  vote: { allow: number; deny: number };
  similarity: string;
  neighbors: NeighborDoc[];
  removed_row: number | null;
  unseen_tags: string[];
}

export interface SuggestionDoc {
  vertex: number;
  scenario: string[];
  current: string;
  proposed: string;
  delta: number;
}

export interface CountersDoc {
  issued: number;
  accepted: number;
  rejected: number;
  remaining_violations: number;
}

export interface SessionDoc {
  id: string;
  target: string;
  status: string;
  suggestion: SuggestionDoc | null;
  counters: CountersDoc;
}

export interface RespondDoc {
  suggestion: SuggestionDoc | null;
  counters: CountersDoc;
  status: string;
}

export interface GroupDoc {
  name: string;
  members: string[];
}

export interface OrderBody {
  groups: GroupDoc[];
  order: [string, string][];
}

export type WeightsDoc = Record<string, [number, number]>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
    readonly cycle?: string[],
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

async function request<T>(
  base: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.headers = { "content-type": "application/json" };
    init.body = JSON.stringify(body);
  }
  const response = await fetch(base + path, init);
  if (!response.ok) {
    let code = "HttpError";
    let detail = response.statusText || String(response.status);
    let cycle: string[] | undefined;
    try {
      const payload = (await response.json()) as { detail?: unknown };
      const info = payload.detail;
      if (typeof info === "string") {
        detail = info;
      } else if (info && typeof info === "object") {
        const record = info as Record<string, unknown>;
        if (typeof record.error === "string") code = record.error;
        if (typeof record.detail === "string") detail = record.detail;
        if (Array.isArray(record.cycle)) cycle = record.cycle as string[];
      }
    } catch {
      // Non-JSON error body; keep the status-line fallback.
    }
    throw new ApiError(response.status, code, detail, cycle);
  }
  return (await response.json()) as T;
}

export interface Client {
  getDataset(): Promise<DatasetSummary>;
  predict(target: string, scenario: string[]): Promise<PredictionDoc>;
  getWeights(target: string): Promise<WeightsDoc>;
  putOrder(target: string, order: OrderBody): Promise<WeightsDoc>;
  openSession(target: string, options?: { cap?: number; autosave?: boolean }): Promise<SessionDoc>;
  getSession(id: string): Promise<SessionDoc>;
  respond(id: string, vertex: number, accept: boolean): Promise<RespondDoc>;
  closeSession(id: string): Promise<{ closed: boolean; counters: CountersDoc }>;
}

export function createClient(base = ""): Client {
  const target = (name: string) => `/api/targets/${encodeURIComponent(name)}`;
  const session = (id: string) => `/api/sessions/${encodeURIComponent(id)}`;
  return {
    getDataset: () => request(base, "GET", "/api/dataset"),
    predict: (name, scenario) =>
      request(base, "POST", `${target(name)}/predict`, { scenario }),
    getWeights: (name) => request(base, "GET", `${target(name)}/weights`),
    putOrder: (name, order) => request(base, "PUT", `${target(name)}/order`, order),
    openSession: (name, options = {}) => {
      const params = new URLSearchParams();
      if (options.cap !== undefined) params.set("cap", String(options.cap));
      if (options.autosave) params.set("autosave", "1");
      const query = params.size > 0 ? `?${params}` : "";
      return request(base, "POST", `${target(name)}/sessions${query}`);
    },
    getSession: (id) => request(base, "GET", session(id)),
    respond: (id, vertex, accept) =>
      request(base, "POST", `${session(id)}/respond`, { vertex, accept }),
    closeSession: (id) => request(base, "DELETE", session(id)),
  };
}
