import type {
  MemoryDocument,
  MutateRequest,
  MutateResponse,
  QueryRequest,
  QueryResponse,
  ServiceError,
  VersionInfo,
} from "./types";

export type QueryOutcome =
  | { ok: true; body: QueryResponse }
  | { ok: false; status: number; body: ServiceError };

export type MutateOutcome =
  | { ok: true; body: MutateResponse }
  | { ok: false; status: number; body: ServiceError };

type FetchLike = typeof fetch;

/** Thin typed client for the memory service HTTP API. */
export class WorkbenchClient {
  constructor(
    readonly baseUrl: string,
    // wrapped so the browser fetch keeps its expected `this`
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`GET ${path} failed with HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  getMemory(): Promise<MemoryDocument> {
    return this.getJson<MemoryDocument>("/memory");
  }

  getVersions(): Promise<VersionInfo[]> {
    return this.getJson<VersionInfo[]>("/versions");
  }

  async postQuery(request: QueryRequest): Promise<QueryOutcome> {
    const response = await this.fetchFn(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    const body = await response.json();
    if (response.ok) {
      return { ok: true, body: body as QueryResponse };
    }
    return { ok: false, status: response.status, body: body as ServiceError };
  }

  async postMutate(request: MutateRequest): Promise<MutateOutcome> {
    const response = await this.fetchFn(`${this.baseUrl}/mutate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    const body = await response.json();
    if (response.ok) {
      return { ok: true, body: body as MutateResponse };
    }
    return { ok: false, status: response.status, body: body as ServiceError };
  }
}
