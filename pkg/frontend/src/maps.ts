// Plain-SVG polygon rendering of GeoJSON grid layers: no tile service,
// works offline from cached payloads.

import type { FeatureCollection, GeoFeature, QuestPayload } from "./types.js";

// 7-class hotspot legend, cold to hot
export const CLASS_COLORS: Record<string, string> = {
  cold99: "#08306b",
  cold95: "#2171b5",
  cold90: "#6baed6",
  neutral: "#f0f0f0",
  hot90: "#fc9272",
  hot95: "#ef3b2c",
  hot99: "#99000d",
};

export const QUEST_COLORS: Record<string, string> = {
  uncharted: "#7a3ff2",
  stale: "#f2a13f",
  campaign: "#2aa84a",
};

export interface RenderedCell {
  index: number;
  points: [number, number][];  // svg coordinates
  fill: string;
  title: string;
}

export interface RenderedMap {
  width: number;
  height: number;
  cells: RenderedCell[];
  svg: string;
}

interface Projection {
  toXY(lon: number, lat: number): [number, number];
}

function fitProjection(features: GeoFeature[], width: number, height: number): Projection {
  let minLon = Infinity, maxLon = -Infinity, minLat = Infinity, maxLat = -Infinity;
  for (const f of features) {
    for (const [lon, lat] of f.geometry.coordinates[0]) {
      minLon = Math.min(minLon, lon);
      maxLon = Math.max(maxLon, lon);
      minLat = Math.min(minLat, lat);
      maxLat = Math.max(maxLat, lat);
    }
  }
  const spanLon = maxLon - minLon || 1;
  const spanLat = maxLat - minLat || 1;
  return {
    toXY: (lon, lat) => [
      ((lon - minLon) / spanLon) * width,
      // svg y grows downward; latitude grows northward
      height - ((lat - minLat) / spanLat) * height,
    ],
  };
}

function toSvg(map: Omit<RenderedMap, "svg">, extra = ""): string {
  const polys = map.cells.map((cell) => {
    const pts = cell.points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    return `<polygon data-cell="${cell.index}" points="${pts}" fill="${cell.fill}" ` +
      `stroke="#555" stroke-width="0.5"><title>${cell.title}</title></polygon>`;
  }).join("");
  return `<svg viewBox="0 0 ${map.width} ${map.height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${polys}${extra}</svg>`;
}

export function renderHotspotMap(layer: FeatureCollection,
                                 mode: "gistar" | "density",
                                 width = 500, height = 500): RenderedMap {
  const proj = fitProjection(layer.features, width, height);
  let maxValue = 0;
  for (const f of layer.features) {
    maxValue = Math.max(maxValue, Number(f.properties.value ?? 0));
  }
  const cells: RenderedCell[] = layer.features.map((f) => {
    const points = f.geometry.coordinates[0].map(([lon, lat]) => proj.toXY(lon, lat));
    let fill: string;
    let title: string;
    if (mode === "gistar") {
      const cls = String(f.properties.class ?? "neutral");
      fill = CLASS_COLORS[cls] ?? CLASS_COLORS.neutral;
      title = `cell ${f.properties.cell_index}: ${cls} ` +
        `(gi*=${Number(f.properties.gi_star).toFixed(2)})`;
    } else {
      const value = Number(f.properties.value ?? 0);
      const intensity = maxValue > 0 ? value / maxValue : 0;
      const level = Math.round(255 - intensity * 200);
      fill = `rgb(255,${level},${level})`;
      title = `cell ${f.properties.cell_index}: density ${value.toExponential(2)}`;
    }
    return { index: Number(f.properties.cell_index), points, fill, title };
  });
  const map = { width, height, cells };
  return { ...map, svg: toSvg(map) };
}

export function renderQuestMap(coverage: FeatureCollection,
                               quests: QuestPayload[],
                               chwPosition: { lat: number; lon: number } | null,
                               width = 500, height = 500): RenderedMap {
  const proj = fitProjection(coverage.features, width, height);
  const questByCell = new Map<number, QuestPayload>();
  for (const q of quests) questByCell.set(q.target_index, q);
  const cells: RenderedCell[] = coverage.features.map((f) => {
    const points = f.geometry.coordinates[0].map(([lon, lat]) => proj.toXY(lon, lat));
    const index = Number(f.properties.cell_index);
    const quest = questByCell.get(index);
    const uncharted = Boolean(f.properties.uncharted);
    const fill = quest ? QUEST_COLORS[quest.kind] ?? "#999"
      : uncharted ? "#ddd6fe" : "#ffffff";
    const title = quest
      ? `quest ${quest.id}: x${quest.bonus_multiplier} until ${quest.expires_at}`
      : uncharted ? `cell ${index}: uncharted`
      : `cell ${index}: staleness ${f.properties.staleness_days ?? "-"}`;
    return { index, points, fill, title };
  });
  let extra = "";
  if (chwPosition) {
    const [x, y] = proj.toXY(chwPosition.lon, chwPosition.lat);
    extra = `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="6" ` +
      `fill="#1d4ed8" stroke="#fff" stroke-width="2"/>`;
  }
  const map = { width, height, cells };
  return { ...map, svg: toSvg(map, extra) };
}
