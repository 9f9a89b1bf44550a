// Display formatting. Authoritative numbers arrive from the API and are
// formatted here only at the moment of display.

export function fmtZ(z: number | null | undefined): string {
  if (z === null || z === undefined) return "-";
  return z.toFixed(2);
}

export function fmtPoints(points: number): string {
  return Number.isInteger(points) ? String(points) : points.toFixed(1);
}

export function fmtRatio(value: number): string {
  return `${(value * 100).toFixed(0)}%`;
}

export function classBadge(label: string | null): string {
  if (label === null) return "unclassified";
  return label;
}
