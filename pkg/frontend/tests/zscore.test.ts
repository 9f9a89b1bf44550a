// Unit tests for the offline z estimate math (estimate-only path; the
// integration suite checks the authoritative server numbers).

import { describe, expect, it } from "vitest";
import { adjustedHeightCm, estimateZ, lmsInverse, lmsZ, restrictedZ } from "../src/zscore.js";

const row = (L: number, M: number, S: number) => ({ key: 0, L, M, S });

describe("lmsZ", () => {
  it("is zero at the median", () => {
    expect(lmsZ(10, row(0.3, 10, 0.1))).toBe(0);
    expect(lmsZ(10, row(0, 10, 0.1))).toBe(0);
  });

  it("matches the linear case", () => {
    expect(lmsZ(11, row(1, 10, 0.1))).toBeCloseTo(1.0, 10);
  });

  it("matches the log case", () => {
    expect(lmsZ(10 * Math.exp(0.2), row(0, 10, 0.1))).toBeCloseTo(2.0, 10);
  });

  it("round-trips with the inverse", () => {
    const r = row(-0.4, 12.5, 0.08);
    for (const z of [-2.5, -1, 0, 1.7, 2.9]) {
      expect(lmsZ(lmsInverse(z, r), r)).toBeCloseTo(z, 9);
    }
  });
});

describe("restrictedZ", () => {
  it("is continuous at the +3 boundary", () => {
    const r = row(-0.35, 11.0, 0.085);
    const x3 = lmsInverse(3, r);
    expect(restrictedZ(x3, r)).toBeCloseTo(3.0, 9);
  });

  it("compresses the far tail linearly", () => {
    const r = row(-0.35, 11.0, 0.085);
    const sd3 = lmsInverse(3, r);
    const sd2 = lmsInverse(2, r);
    const x = sd3 * 1.3;
    expect(restrictedZ(x, r)).toBeCloseTo(3 + (x - sd3) / (sd3 - sd2), 9);
  });
});

describe("adjustedHeightCm", () => {
  it("converts standing to expected recumbent length under age 2", () => {
    expect(adjustedHeightCm(80, "standing", 400)).toBeCloseTo(80.7);
    expect(adjustedHeightCm(80, "recumbent", 400)).toBe(80);
  });

  it("converts recumbent to expected standing height over age 2", () => {
    expect(adjustedHeightCm(95, "recumbent", 900)).toBeCloseTo(94.3);
  });
});

describe("estimateZ", () => {
  it("uses cached rows per indicator", () => {
    const rows = {
      wfa: row(0.2, 10, 0.11),
      hfa: row(1, 76, 0.039),
      muacfa: row(0.27, 146, 0.073),
    };
    const z = estimateZ({ weight: 10, height: 76, heightMode: "recumbent", muac: 146 },
                        rows, 400);
    expect(z.waz).toBeCloseTo(0, 9);
    expect(z.haz).toBeCloseTo(0, 9);
    expect(z.muacz).toBeCloseTo(0, 9);
    expect(z.whz).toBeUndefined(); // no wfh row cached
  });
});
