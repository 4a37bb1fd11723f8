/**
 * Typed REST client. All server communication funnels through this module;
 * the UI never computes invariants or canonical forms on its own.
 */

import {
  GraphRecordView,
  InvariantDescriptor,
  MetaListView,
  RepositionPayload,
  SearchRequest,
  SearchResponse,
  SubmissionPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly detail: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface SubmitOutcome {
  kind: "created" | "duplicate";
  id: number;
}

export class GraphhausClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  logout(): void {
    this.token = null;
  }

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<{ status: number; json: unknown }> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const json = await response.json().catch(() => ({}));
    return { status: response.status, json };
  }

  private async expect(
    method: string,
    path: string,
    body: unknown,
    okStatus: number,
  ): Promise<unknown> {
    const { status, json } = await this.request(method, path, body);
    if (status !== okStatus) {
      const payload = (json ?? {}) as Record<string, unknown>;
      throw new ApiError(status, String(payload["error"] ?? `HTTP ${status}`), payload);
    }
    return json;
  }

  async register(login: string, password: string, email = ""): Promise<number> {
    const json = (await this.expect(
      "POST",
      "/api/register",
      { login, password, email },
      201,
    )) as { user_id: number };
    return json.user_id;
  }

  async login(login: string, password: string): Promise<void> {
    const json = (await this.expect("POST", "/api/login", { login, password }, 200)) as {
      token: string;
    };
    this.token = json.token;
  }

  /**
   * Submit one graph. A 409 is not an error: the graph is already known and
   * the caller is invited to add a comment on the existing record.
   */
  async submitGraph(payload: SubmissionPayload): Promise<SubmitOutcome> {
    SubmissionPayload.parse(payload);
    const { status, json } = await this.request("POST", "/api/graphs", payload);
    if (status === 201) return { kind: "created", id: (json as { id: number }).id };
    if (status === 409) {
      return { kind: "duplicate", id: (json as { existing_id: number }).existing_id };
    }
    const payload_ = (json ?? {}) as Record<string, unknown>;
    throw new ApiError(status, String(payload_["error"] ?? `HTTP ${status}`), payload_);
  }

  async getGraph(id: number): Promise<GraphRecordView> {
    return GraphRecordView.parse(await this.expect("GET", `/api/graphs/${id}`, undefined, 200));
  }

  async search(request: SearchRequest): Promise<SearchResponse> {
    return SearchResponse.parse(
      await this.expect("POST", "/api/graphs/search", request, 200),
    );
  }

  async addComment(graphId: number, body: string): Promise<void> {
    await this.expect("POST", `/api/graphs/${graphId}/comments`, { body }, 201);
  }

  /** Drawing updates send positions only; edges stay server-side. */
  async updateDrawing(graphId: number, payload: RepositionPayload): Promise<void> {
    RepositionPayload.parse(payload);
    await this.expect("POST", `/api/graphs/${graphId}/embeddings`, payload, 201);
  }

  async markInteresting(graphId: number, invariant: string): Promise<void> {
    await this.expect("POST", `/api/graphs/${graphId}/interesting`, { invariant }, 201);
  }

  async invariants(): Promise<InvariantDescriptor[]> {
    const json = await this.expect("GET", "/api/invariants", undefined, 200);
    return (json as unknown[]).map((d) => InvariantDescriptor.parse(d));
  }

  async metaList(family: string): Promise<MetaListView> {
    return MetaListView.parse(await this.expect("GET", `/api/meta/${family}`, undefined, 200));
  }

  async health(): Promise<{ status: string; graphs: number }> {
    return (await this.expect("GET", "/api/health", undefined, 200)) as {
      status: string;
      graphs: number;
    };
  }
}
