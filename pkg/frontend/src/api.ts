import {
  Assessment,
  AssessmentSchema,
  ClustersPayload,
  ClustersPayloadSchema,
  CombosPayload,
  CombosPayloadSchema,
  ElbowPayload,
  ElbowPayloadSchema,
  ReadinessPayload,
  ReadinessPayloadSchema,
  ResponseSetBody,
  ScoreResult,
  ScoreResultSchema,
  TargetingPayload,
  TargetingPayloadSchema,
  Theme,
  ThemesPayloadSchema
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiConfig {
  baseUrl?: string;
  token?: string;
  fetchImpl?: FetchLike;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown
  ) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

export class NetworkError extends Error {}

export interface ApiClient {
  getThemes(): Promise<Theme[]>;
  getClusters(): Promise<ClustersPayload>;
  getElbow(): Promise<ElbowPayload>;
  getCombos(): Promise<CombosPayload>;
  getAssessment(id: string): Promise<Assessment>;
  postResponse(body: ResponseSetBody): Promise<ScoreResult>;
  getReadiness(): Promise<ReadinessPayload>;
  postTargeting(themeId: string, quota: number): Promise<TargetingPayload>;
}

export function createApi(config: ApiConfig = {}): ApiClient {
  const base = (config.baseUrl ?? "").replace(/\/$/, "");
  const fetchImpl = config.fetchImpl ?? ((input, init) => fetch(input, init));

  async function call(path: string, init?: RequestInit): Promise<unknown> {
    const headers: Record<string, string> = {
      ...(init?.headers as Record<string, string> | undefined)
    };
    if (config.token) headers["Authorization"] = `Bearer ${config.token}`;
    let response: Response;
    try {
      response = await fetchImpl(`${base}${path}`, { ...init, headers });
    } catch (err) {
      throw new NetworkError(`request to ${path} failed: ${String(err)}`);
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      // non-JSON body; keep null
    }
    if (!response.ok) {
      throw new ApiError(response.status, (payload as { detail?: unknown })?.detail ?? payload);
    }
    return payload;
  }

  return {
    getThemes: async () => ThemesPayloadSchema.parse(await call("/api/themes")),
    getClusters: async () => ClustersPayloadSchema.parse(await call("/api/clusters")),
    getElbow: async () => ElbowPayloadSchema.parse(await call("/api/elbow")),
    getCombos: async () => CombosPayloadSchema.parse(await call("/api/combos")),
    getAssessment: async (id) =>
      AssessmentSchema.parse(await call(`/api/assessments/${encodeURIComponent(id)}`)),
    postResponse: async (body) =>
      ScoreResultSchema.parse(
        await call("/api/responses", {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify(body)
        })
      ),
    getReadiness: async () => ReadinessPayloadSchema.parse(await call("/api/readiness")),
    postTargeting: async (themeId, quota) =>
      TargetingPayloadSchema.parse(
        await call(`/api/targeting/${encodeURIComponent(themeId)}?quota=${quota}`, {
          method: "POST"
        })
      )
  };
}
