// Local z-score estimation for offline preview only. Never authoritative:
// the server's answer replaces it the moment connectivity returns. Uses
// the LMS rows the server attached to an earlier preview for this child.

import type { LmsRow, ZScorePayload } from "./types.js";

const RECUMBENT_OFFSET_CM = 0.7;
const STANDING_AGE_DAYS = 731;

export function lmsZ(x: number, row: LmsRow): number {
  if (x <= 0) throw new Error(`measurement value must be > 0, got ${x}`);
  if (Math.abs(row.L) > 1e-13) {
    return Math.expm1(row.L * Math.log(x / row.M)) / (row.L * row.S);
  }
  return Math.log(x / row.M) / row.S;
}

export function lmsInverse(z: number, row: LmsRow): number {
  if (Math.abs(row.L) > 1e-13) {
    const base = 1 + row.L * row.S * z;
    if (base <= 0) throw new Error("z outside the LMS branch");
    return row.M * Math.exp(Math.log1p(row.L * row.S * z) / row.L);
  }
  return row.M * Math.exp(row.S * z);
}

// weight-based indicators restrict |z| > 3 to a linear tail
export function restrictedZ(x: number, row: LmsRow): number {
  const z = lmsZ(x, row);
  if (z > 3) {
    const sd3 = lmsInverse(3, row);
    const sd2 = lmsInverse(2, row);
    return 3 + (x - sd3) / (sd3 - sd2);
  }
  if (z < -3) {
    const sd3n = lmsInverse(-3, row);
    const sd2n = lmsInverse(-2, row);
    return -3 + (x - sd3n) / (sd2n - sd3n);
  }
  return z;
}

export function adjustedHeightCm(
  height: number,
  mode: "standing" | "recumbent",
  ageDays: number | null,
): number {
  if (ageDays === null) return height;
  const expectsStanding = ageDays >= STANDING_AGE_DAYS;
  if (expectsStanding && mode === "recumbent") return height - RECUMBENT_OFFSET_CM;
  if (!expectsStanding && mode === "standing") return height + RECUMBENT_OFFSET_CM;
  return height;
}

export interface EstimateInput {
  weight?: number | null;
  height?: number | null;
  heightMode: "standing" | "recumbent";
  muac?: number | null;
}

/** Estimate z values from cached reference rows (a prior server preview). */
export function estimateZ(
  input: EstimateInput,
  rows: Record<string, LmsRow>,
  ageDays: number | null,
): Partial<ZScorePayload> {
  const out: Partial<ZScorePayload> = {};
  const height = input.height == null
    ? null
    : adjustedHeightCm(input.height, input.heightMode, ageDays);
  if (input.weight != null && rows.wfa) out.waz = restrictedZ(input.weight, rows.wfa);
  if (height != null && rows.hfa) out.haz = lmsZ(height, rows.hfa);
  if (input.weight != null && height != null && rows.wfh) {
    out.whz = restrictedZ(input.weight, rows.wfh);
  }
  if (input.muac != null && rows.muacfa) out.muacz = lmsZ(input.muac, rows.muacfa);
  return out;
}
