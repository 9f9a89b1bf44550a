"""GeoJSON and plain-text exports of grid layers.

One Polygon feature per cell; properties carry whatever the layer knows
(value, gi_star, p_value, class, staleness). Matrix dumps are diff-stable
text used by the golden tests: one grid row per line, 6 significant
digits, row 0 = southernmost.
"""

from __future__ import annotations

import numpy as np

from .coverage import CoverageGrid
from .grid import GridSpec
from .hotspot import HotspotLayer


def _feature(spec: GridSpec, row: int, col: int, properties: dict) -> dict:
    return {
        "type": "Feature",
        "geometry": {
            "type": "Polygon",
            "coordinates": [[list(pt) for pt in spec.cell_corners_latlon(row, col)]],
        },
        "properties": {"row": row, "col": col,
                       "cell_index": spec.cell_index(row, col), **properties},
    }


def hotspot_geojson(layer: HotspotLayer) -> dict:
    features = []
    for row in range(layer.spec.rows):
        for col in range(layer.spec.cols):
            features.append(_feature(layer.spec, row, col, {
                "value": float(layer.values[row, col]),
                "gi_star": float(layer.gi[row, col]),
                "p_value": float(layer.p_value[row, col]),
                "class": str(layer.classes[row, col]),
            }))
    return {
        "type": "FeatureCollection",
        "features": features,
        "generated_at": layer.generated_at.isoformat(),
    }


def density_geojson(density: np.ndarray, spec: GridSpec, generated_at) -> dict:
    features = []
    for row in range(spec.rows):
        for col in range(spec.cols):
            features.append(_feature(spec, row, col,
                                     {"value": float(density[row, col])}))
    return {"type": "FeatureCollection", "features": features,
            "generated_at": generated_at.isoformat()}


def coverage_geojson(grid: CoverageGrid) -> dict:
    features = []
    for cell in grid.cells:
        features.append(_feature(grid.spec, cell.row, cell.col, {
            "n_children_known": cell.n_children_known,
            "n_measured_window": cell.n_measured_window,
            "last_measurement": (cell.last_measurement.isoformat()
                                 if cell.last_measurement else None),
            "staleness_days": cell.staleness_days,
            "uncharted": cell.uncharted,
        }))
    return {"type": "FeatureCollection", "features": features,
            "generated_at": grid.generated_at.isoformat()}


def matrix_dump(values: np.ndarray, fmt: str = "%.6g") -> str:
    values = np.asarray(values)
    lines = []
    for row in values:
        lines.append(" ".join(fmt % v if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"
