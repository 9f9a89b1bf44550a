// API payload shapes, mirroring the platform's JSON responses.

export interface MeasurementPayload {
  id: string;
  child_id: string;
  chw_id: string;
  timestamp: string;
  lat: number;
  lon: number;
  weight: number | null;
  height: number | null;
  height_mode: "standing" | "recumbent";
  muac: number | null;
  entry_duration: number | null;
}

export interface SyncOutcome {
  id: string;
  status: "accepted" | "duplicate" | "rejected";
  reason?: string;
  detail?: string;
  points?: number;
  blocked?: boolean;
  zscores?: ZScorePayload;
  new_badges?: string[];
}

export interface Classification {
  stunting: string | null;
  wasting: string | null;
  underweight: string | null;
  muac_band: string | null;
}

export interface LmsRow {
  key: number;
  L: number;
  M: number;
  S: number;
}

export interface ZScorePayload {
  waz: number | null;
  haz: number | null;
  whz: number | null;
  muacz: number | null;
  flags: string[];
  classification: Classification;
  rows?: Record<string, LmsRow>;
  age_days?: number | null;
}

export interface QuestPayload {
  id: string;
  target_row: number;
  target_col: number;
  target_index: number;
  kind: "uncharted" | "stale" | "campaign";
  bonus_multiplier: number;
  generated_at: string;
  expires_at: string;
}

export interface QuestsResponse {
  chw_id: string;
  generated_at: string;
  quests: QuestPayload[];
}

export interface GeoFeature {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: Record<string, unknown> & { row: number; col: number; cell_index: number };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: GeoFeature[];
  generated_at: string;
}

export interface AlertPayload {
  id: string;
  kind: string;
  severity: "info" | "warn" | "block";
  chw_id: string;
  measurement_ids: string[];
  child_id: string | null;
  statistic: number | null;
  threshold: number | null;
  detail: string;
  created_at: string;
  resolved: boolean;
  resolution: string | null;
}

export interface EfficiencyPayload {
  chw_id: string;
  accuracy: number;
  speed: number;
  coverage: number;
  composite: number;
  n_submissions: number;
  inactive: boolean;
}

export interface LeaderboardResponse {
  individual: { chw_id: string; points: number; rank: number }[];
  teams: { team_id: string; points: number; rank: number }[];
}

export interface ChildPayload {
  id: string;
  sex: "F" | "M";
  birth_date: string;
  home_lat: number;
  home_lon: number;
  chw_id: string;
}
