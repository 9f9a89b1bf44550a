// Thin typed client over the platform HTTP API. The client never derives
// authoritative numbers: it reports exactly what the server said.

import type {
  AlertPayload, ChildPayload, EfficiencyPayload, FeatureCollection,
  LeaderboardResponse, MeasurementPayload, QuestsResponse, SyncOutcome,
  ZScorePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface ZScoreRequest {
  child_id?: string;
  sex?: "F" | "M";
  age_days?: number;
  weight?: number | null;
  height?: number | null;
  height_mode?: "standing" | "recumbent";
  muac?: number | null;
  timestamp?: string;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string,
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: {
        "content-type": "application/json",
        authorization: `Bearer ${this.token}`,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const data = await res.json();
        detail = (data as { detail?: string }).detail ?? detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  healthz(): Promise<{ status: string; accepted_measurements: number }> {
    return this.request("GET", "/v1/healthz");
  }

  sync(batchId: string, chwId: string, measurements: MeasurementPayload[]):
      Promise<{ batch_id: string; outcomes: SyncOutcome[] }> {
    return this.request("POST", "/v1/sync", {
      batch_id: batchId,
      chw_id: chwId,
      client_timestamp: new Date().toISOString(),
      measurements,
    });
  }

  zscorePreview(req: ZScoreRequest): Promise<ZScorePayload> {
    return this.request("POST", "/v1/zscore", req);
  }

  quests(chwId?: string, max?: number): Promise<QuestsResponse> {
    const params = new URLSearchParams();
    if (chwId) params.set("chw_id", chwId);
    if (max !== undefined) params.set("max_quests", String(max));
    const qs = params.toString();
    return this.request("GET", `/v1/quests${qs ? "?" + qs : ""}`);
  }

  leaderboard(): Promise<LeaderboardResponse> {
    return this.request("GET", "/v1/leaderboard");
  }

  hotspots(layer: "gistar" | "density"): Promise<FeatureCollection> {
    return this.request("GET", `/v1/hotspots?layer=${layer}`);
  }

  coverage(): Promise<FeatureCollection> {
    return this.request("GET", "/v1/coverage");
  }

  alerts(): Promise<{ alerts: AlertPayload[] }> {
    return this.request("GET", "/v1/alerts");
  }

  resolveAlert(alertId: string, resolution: "confirmed" | "dismissed"):
      Promise<AlertPayload> {
    return this.request("POST", `/v1/alerts/${alertId}/resolution`, { resolution });
  }

  efficiency(chwId?: string): Promise<EfficiencyPayload> {
    const qs = chwId ? `?chw_id=${encodeURIComponent(chwId)}` : "";
    return this.request("GET", `/v1/efficiency${qs}`);
  }

  children(): Promise<{ children: ChildPayload[] }> {
    return this.request("GET", "/v1/children");
  }
}
