import type { ExampleClaim, Trace, TraceRow } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface CheckRequest {
  claim_text: string;
  qa_backend?: string;
  max_depth?: number;
}

/** Thin typed wrapper over the service's JSON endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  getExamples(): Promise<ExampleClaim[]> {
    return this.request("/api/examples");
  }

  getBackends(): Promise<string[]> {
    return this.request("/api/backends");
  }

  async submitCheck(req: CheckRequest): Promise<string> {
    const body = await this.request<{ trace_id: string }>("/api/check", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    return body.trace_id;
  }

  getTrace(traceId: string): Promise<Trace> {
    return this.request(`/api/trace/${traceId}`);
  }

  listTraces(limit = 50): Promise<TraceRow[]> {
    return this.request(`/api/traces?limit=${limit}`);
  }

  eventsUrl(traceId: string): string {
    return `${this.baseUrl}/api/trace/${traceId}/events`;
  }
}
