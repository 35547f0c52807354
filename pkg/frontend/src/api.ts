/** Typed fetch client for the statement service's documented JSON API. */

import type {
  AnchorDoc,
  CrosswalkDoc,
  ErrorEnvelope,
  FacetFilterDoc,
  FacetedResultDoc,
  HistoryEvent,
  PatternDoc,
  PatternDraft,
  RenderDoc,
  StatementIn,
  TermGroupDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

function isEnvelope(body: unknown): body is ErrorEnvelope {
  return (
    typeof body === "object" &&
    body !== null &&
    typeof (body as ErrorEnvelope).error === "object" &&
    (body as ErrorEnvelope).error !== null &&
    typeof (body as ErrorEnvelope).error.message === "string"
  );
}

function query(params: Record<string, string | number | boolean | undefined>): string {
  const q = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) q.set(key, String(value));
  }
  const s = q.toString();
  return s ? `?${s}` : "";
}

export class ApiClient {
  constructor(
    readonly baseUrl = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.url(path), init);
    } catch (err) {
      throw new ApiError(0, "Unreachable", `service unreachable: ${String(err)}`);
    }
    const text = await response.text();
    let parsed: unknown = null;
    if (text) {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = null;
      }
    }
    if (!response.ok) {
      if (isEnvelope(parsed)) {
        const { code, message, details } = parsed.error;
        throw new ApiError(response.status, code, message, details ?? {});
      }
      throw new ApiError(response.status, "HttpError", text || response.statusText);
    }
    return parsed as T;
  }

  // -- statement types ----------------------------------------------------

  listTypes(): Promise<{ types: PatternDoc[] }> {
    return this.request("GET", "/types");
  }

  getType(key: string, version?: number): Promise<PatternDoc> {
    return this.request("GET", `/types/${encodeURI(key)}${query({ version })}`);
  }

  createType(draft: PatternDraft): Promise<PatternDoc> {
    return this.request("POST", "/types", draft);
  }

  previewDraft(
    body: {
      draft?: PatternDraft;
      type?: string;
      fill?: Record<string, string[]>;
      negated?: boolean;
    },
  ): Promise<{ text: string; formalized: string }> {
    return this.request("POST", "/types/preview", body);
  }

  reorderType(key: string, order: string[]): Promise<PatternDoc> {
    return this.request("POST", `/types/${encodeURI(key)}/reorder`, { order });
  }

  // -- statements ----------------------------------------------------------

  createStatement(body: StatementIn): Promise<AnchorDoc> {
    return this.request("POST", "/statements", body);
  }

  listStatements(type?: string, includeDeleted = false): Promise<{ statements: AnchorDoc[] }> {
    return this.request(
      "GET",
      `/statements${query({ type, include_deleted: includeDeleted || undefined })}`,
    );
  }

  getStatement(id: string, opts: { version?: number; includeDeleted?: boolean } = {}):
    Promise<AnchorDoc> {
    return this.request(
      "GET",
      `/statements/${encodeURI(id)}${query({
        version: opts.version,
        include_deleted: opts.includeDeleted || undefined,
      })}`,
    );
  }

  updateStatement(
    id: string,
    body: { values: Record<string, { iri?: string; label?: string; lexical?: string }[]>; editor: string },
  ): Promise<AnchorDoc> {
    return this.request("PUT", `/statements/${encodeURI(id)}`, body);
  }

  deleteStatement(id: string, by: string): Promise<{ id: string; deleted: boolean }> {
    return this.request("DELETE", `/statements/${encodeURI(id)}${query({ by })}`);
  }

  renderStatement(id: string, version?: number):
    Promise<RenderDoc & { negated: boolean; version: number }> {
    return this.request("GET", `/statements/${encodeURI(id)}/render${query({ version })}`);
  }

  history(id: string): Promise<{ history: HistoryEvent[] }> {
    return this.request("GET", `/statements/${encodeURI(id)}/history`);
  }

  registerLabels(labels: Record<string, string>): Promise<{ registered: number }> {
    return this.request("POST", "/labels", { labels });
  }

  /** URL of the static mind-map download (json or dot). */
  mindmapUrl(id: string, format: "json" | "dot"): string {
    return this.url(`/statements/${encodeURI(id)}/mindmap${query({ format })}`);
  }

  nanopubUrl(id: string): string {
    return this.url(`/statements/${encodeURI(id)}/nanopub`);
  }

  // -- search ----------------------------------------------------------------

  searchTerm(term: string): Promise<{ groups: TermGroupDoc[] }> {
    return this.request("GET", `/search${query({ term })}`);
  }

  searchFaceted(body: {
    statement_type: string;
    filters?: Record<string, FacetFilterDoc>;
    include_deleted?: boolean;
  }): Promise<FacetedResultDoc> {
    return this.request("POST", "/search/faceted", body);
  }

  // -- crosswalks --------------------------------------------------------------

  listCrosswalks(): Promise<{ crosswalks: CrosswalkDoc[] }> {
    return this.request("GET", "/crosswalks");
  }
}
