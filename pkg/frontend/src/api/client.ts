import type {
  AnalysisReport,
  AnalysisRequest,
  ErrorDetail,
  FixtureEntry,
  SessionInfo,
} from "./types";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly position?: number;

  constructor(status: number, detail: ErrorDetail) {
    super(detail.message);
    this.status = status;
    this.code = detail.code;
    this.position = detail.position;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail: ErrorDetail = { code: "HTTP_" + response.status, message: response.statusText };
  try {
    const body = await response.json();
    if (body && typeof body.detail === "object") detail = body.detail;
    else if (typeof body.detail === "string") detail = { code: "ERROR", message: body.detail };
  } catch {
    // non-JSON error body; keep the status-based detail
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(options: { baseUrl?: string; fetchFn?: FetchLike } = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.fetchFn = options.fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  async listFixtures(): Promise<FixtureEntry[]> {
    const doc = await this.json<{ fixtures: FixtureEntry[] }>("/fixtures");
    return doc.fixtures;
  }

  async createSessionFromFixture(name: string): Promise<SessionInfo> {
    return this.json<SessionInfo>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ fixture: name }),
    });
  }

  async createSessionFromCsv(file: Blob, filename = "data.csv"): Promise<SessionInfo> {
    const form = new FormData();
    form.append("file", file, filename);
    return this.json<SessionInfo>("/sessions", { method: "POST", body: form });
  }

  async getFeatures(sessionId: string): Promise<SessionInfo> {
    return this.json<SessionInfo>(`/sessions/${sessionId}/features`);
  }

  async runAnalysis(
    sessionId: string,
    request: AnalysisRequest,
    signal?: AbortSignal,
  ): Promise<AnalysisReport> {
    return this.json<AnalysisReport>(`/sessions/${sessionId}/analysis`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
  }

  async deleteSession(sessionId: string): Promise<void> {
    const response = await this.fetchFn(this.baseUrl + `/sessions/${sessionId}`, {
      method: "DELETE",
    });
    await raiseForStatus(response);
  }
}
