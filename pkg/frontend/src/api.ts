// Thin HTTP client over the serve-mode API. The fetch function is
// injectable so tests can run against a scripted mock.

import { assertMapDocument } from "./types.js";
import type {
  DensityDocument,
  MapConfig,
  MapDocument,
  NeighborsDocument,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through
  }
  return `HTTP ${response.status}`;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path);
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as T;
  }

  async getMap(): Promise<MapDocument> {
    return assertMapDocument(await this.get<unknown>("/map"));
  }

  getConfig(): Promise<MapConfig> {
    return this.get<MapConfig>("/config");
  }

  getDensity(): Promise<DensityDocument> {
    return this.get<DensityDocument>("/density");
  }

  getNeighbors(nodeId: number): Promise<NeighborsDocument> {
    return this.get<NeighborsDocument>(`/node/${nodeId}/neighbors`);
  }

  async postThesaurus(tsv: string): Promise<void> {
    const response = await this.fetchFn(this.baseUrl + "/thesaurus", {
      method: "POST",
      headers: { "Content-Type": "text/tab-separated-values" },
      body: tsv,
    });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
  }

  async postRebuild(): Promise<MapDocument> {
    const response = await this.fetchFn(this.baseUrl + "/rebuild", { method: "POST" });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return assertMapDocument(await response.json());
  }
}
