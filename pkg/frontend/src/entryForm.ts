// Measurement entry: client-side range checks mirroring the server's
// invariants, server-authoritative z preview with a clearly labeled local
// estimate when offline, and queueing into the outbox.

import type { ApiClient } from "./api.js";
import { newMeasurementId, Outbox } from "./outbox.js";
import type { LmsRow, MeasurementPayload, ZScorePayload } from "./types.js";
import { estimateZ } from "./zscore.js";

export interface EntryInput {
  childId: string;
  weight?: number | null;
  height?: number | null;
  heightMode: "standing" | "recumbent";
  muac?: number | null;
  entryDurationS?: number;
}

// same bounds the server enforces; a field error here never reaches the wire
export function validateEntry(input: EntryInput): string[] {
  const errors: string[] = [];
  if (!input.childId) errors.push("child is required");
  const { weight, height, muac } = input;
  if (weight == null && height == null && muac == null) {
    errors.push("enter at least one of weight, height, or MUAC");
  }
  if (weight != null && !(weight > 0 && weight <= 40)) {
    errors.push("weight must be in (0, 40] kg");
  }
  if (height != null && !(height > 30 && height <= 140)) {
    errors.push("height must be in (30, 140] cm");
  }
  if (muac != null && !(muac > 60 && muac <= 250)) {
    errors.push("MUAC must be in (60, 250] mm");
  }
  return errors;
}

export interface PreviewResult {
  source: "server" | "estimate";
  z: Partial<ZScorePayload>;
}

export interface RowCache {
  rows: Record<string, LmsRow>;
  ageDays: number | null;
}

/** Server round-trip preview; falls back to a local estimate computed
 * from the rows cached off the last successful preview for this child. */
export async function previewZ(
  api: ApiClient,
  input: EntryInput,
  rowCache: Map<string, RowCache>,
): Promise<PreviewResult> {
  const errors = validateEntry(input);
  if (errors.length > 0) throw new Error(errors.join("; "));
  try {
    const z = await api.zscorePreview({
      child_id: input.childId,
      weight: input.weight ?? null,
      height: input.height ?? null,
      height_mode: input.heightMode,
      muac: input.muac ?? null,
    });
    if (z.rows) {
      rowCache.set(input.childId, { rows: z.rows, ageDays: z.age_days ?? null });
    }
    return { source: "server", z };
  } catch (err) {
    const cached = rowCache.get(input.childId);
    if (!cached) throw err;
    return {
      source: "estimate",
      z: estimateZ(
        { weight: input.weight, height: input.height,
          heightMode: input.heightMode, muac: input.muac },
        cached.rows, cached.ageDays,
      ),
    };
  }
}

export function buildMeasurement(
  input: EntryInput,
  chwId: string,
  location: { lat: number; lon: number },
  now: Date = new Date(),
): MeasurementPayload {
  return {
    id: newMeasurementId(),
    child_id: input.childId,
    chw_id: chwId,
    timestamp: now.toISOString(),
    lat: location.lat,
    lon: location.lon,
    weight: input.weight ?? null,
    height: input.height ?? null,
    height_mode: input.heightMode,
    muac: input.muac ?? null,
    entry_duration: input.entryDurationS ?? null,
  };
}

/** Validate, stamp an id, and queue; returns the queued payload. */
export function queueEntry(
  outbox: Outbox,
  input: EntryInput,
  chwId: string,
  location: { lat: number; lon: number },
  now?: Date,
): MeasurementPayload {
  const errors = validateEntry(input);
  if (errors.length > 0) throw new Error(errors.join("; "));
  const measurement = buildMeasurement(input, chwId, location, now);
  outbox.enqueue(measurement);
  return measurement;
}
