// Supervisor dashboard contract: rows rendered equal API payload counts,
// alert resolutions post back, and map cells are geometrically the
// payload polygons.

import { beforeAll, describe, expect, inject, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { renderAlertQueue, renderEfficiencyTable, renderLeaderboard } from "../src/dashboard.js";
import { CLASS_COLORS, renderHotspotMap, renderQuestMap } from "../src/maps.js";
import { fmtPoints } from "../src/format.js";

let sup: ApiClient;
let chw: ApiClient;

beforeAll(() => {
  sup = new ApiClient(inject("baseUrl"), "suptok");
  chw = new ApiClient(inject("baseUrl"), "chw1tok");
});

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("supervisor dashboard", () => {
  it("renders one alert row per API alert", async () => {
    const payload = await sup.alerts();
    expect(payload.alerts.length).toBeGreaterThan(0); // fixture plants fraud
    const html = renderAlertQueue(payload.alerts);
    expect(count(html, "<tr data-alert=")).toBe(payload.alerts.length);
  });

  it("alerts are supervisor-only", async () => {
    await expect(chw.alerts()).rejects.toMatchObject({ status: 403 });
  });

  it("resolving an alert posts its disposition", async () => {
    const payload = await sup.alerts();
    const open = payload.alerts.find((a) => !a.resolved)!;
    const resolved = await sup.resolveAlert(open.id, "dismissed");
    expect(resolved.resolved).toBe(true);
    expect(resolved.resolution).toBe("dismissed");
    const refreshed = await sup.alerts();
    expect(refreshed.alerts.find((a) => a.id === open.id)!.resolved).toBe(true);
  });

  it("efficiency table equals the API payloads", async () => {
    const children = (await sup.children()).children;
    const chwIds = [...new Set(children.map((c) => c.chw_id))].sort();
    const scores = [];
    for (const id of chwIds) scores.push(await sup.efficiency(id));
    const html = renderEfficiencyTable(scores);
    expect(count(html, "<tr data-chw=")).toBe(scores.length);
    for (const s of scores) {
      expect(html).toContain(`data-chw="${s.chw_id}"`);
      expect(html).toContain(fmtPoints(s.composite));
    }
  });

  it("leaderboard rows equal the API payload", async () => {
    const board = await sup.leaderboard();
    const html = renderLeaderboard(board);
    expect(count(html, "data-chw=")).toBe(board.individual.length);
    expect(count(html, "data-team=")).toBe(board.teams.length);
  });

  it("hotspot map has one polygon per feature with legend colors", async () => {
    const layer = await sup.hotspots("gistar");
    const map = renderHotspotMap(layer, "gistar");
    expect(map.cells.length).toBe(layer.features.length);
    const legal = new Set(Object.values(CLASS_COLORS));
    for (const cell of map.cells) {
      expect(legal.has(cell.fill)).toBe(true);
    }
  });
});

describe("quest map geometry", () => {
  it("cell polygons are the payload polygons under the fitted projection", async () => {
    const coverage = await chw.coverage();
    const quests = await chw.quests();
    const map = renderQuestMap(coverage, quests.quests, null);
    expect(map.cells.length).toBe(coverage.features.length);

    // recompute the projection exactly as documented: linear fit of the
    // payload bbox onto the viewport, y flipped
    let minLon = Infinity, maxLon = -Infinity, minLat = Infinity, maxLat = -Infinity;
    for (const f of coverage.features) {
      for (const [lon, lat] of f.geometry.coordinates[0]) {
        minLon = Math.min(minLon, lon); maxLon = Math.max(maxLon, lon);
        minLat = Math.min(minLat, lat); maxLat = Math.max(maxLat, lat);
      }
    }
    for (let i = 0; i < coverage.features.length; i++) {
      const ring = coverage.features[i].geometry.coordinates[0];
      const cell = map.cells[i];
      expect(cell.points.length).toBe(ring.length);
      for (let j = 0; j < ring.length; j++) {
        const [lon, lat] = ring[j];
        const x = ((lon - minLon) / (maxLon - minLon)) * map.width;
        const y = map.height - ((lat - minLat) / (maxLat - minLat)) * map.height;
        expect(cell.points[j][0]).toBeCloseTo(x, 9);
        expect(cell.points[j][1]).toBeCloseTo(y, 9);
      }
    }
  });

  it("quest cells are highlighted", async () => {
    const coverage = await chw.coverage();
    const quests = await chw.quests();
    const map = renderQuestMap(coverage, quests.quests, null);
    for (const q of quests.quests) {
      const cell = map.cells.find((c) => c.index === q.target_index)!;
      expect(cell.title).toContain(q.id);
    }
  });
});
