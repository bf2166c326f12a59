import type {
  ConversationDetail,
  Criteria,
  Overview,
  PatternKind,
  PatternsResponse,
  SummaryResponse,
  TreeResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export interface PatternSort {
  key: "length" | "support" | "avg_score";
  direction: "asc" | "desc";
}

export interface TreeRequest {
  criteria?: Criteria;
  prune?: number;
  gain_scale?: number;
  base_length?: number;
  highlight_pattern?: { kind: PatternKind; codes: string[] };
}

/** Thin typed client over the analytics API. */
export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload.code ?? "error", payload.detail ?? "");
    }
    return payload as T;
  }

  overview(): Promise<Overview> {
    return this.request("GET", "/api/overview");
  }

  summary(criteria: Criteria, mode: string, groupBy?: string): Promise<SummaryResponse> {
    return this.request("POST", "/api/summary", { criteria, mode, group_by: groupBy });
  }

  patterns(criteria: Criteria, sort?: PatternSort, minSupport?: number): Promise<PatternsResponse> {
    const body: Record<string, unknown> = { criteria };
    if (sort) body.sort = sort;
    if (minSupport !== undefined) body.params = { min_support: minSupport };
    return this.request("POST", "/api/patterns", body);
  }

  tree(request: TreeRequest): Promise<TreeResponse> {
    return this.request("POST", "/api/tree", request);
  }

  conversation(student: string, task: string): Promise<ConversationDetail> {
    return this.request(
      "GET",
      `/api/conversation/${encodeURIComponent(student)}/${encodeURIComponent(task)}`,
    );
  }
}
