"""Spatial grid over a local equirectangular projection.

Precinct-scale maps make a full geodesy stack unnecessary: meters are
derived from degrees via cos-latitude scaling about the grid origin.
The origin is the south-west corner of cell (0, 0); rows grow northward,
columns eastward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

EARTH_RADIUS_M = 6371000.0
M_PER_DEG = EARTH_RADIUS_M * math.pi / 180.0


@dataclass(frozen=True)
class GridSpec:
    origin_lat: float
    origin_lon: float
    cell_size_m: float
    rows: int
    cols: int

    def __post_init__(self):
        if not self.cell_size_m > 0:
            raise DomainError("cell_size_m must be > 0")
        if self.rows < 1 or self.cols < 1:
            raise DomainError("grid must have at least one row and column")

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    def to_xy(self, lat: float, lon: float) -> tuple[float, float]:
        """Meters east/north of the origin."""
        x = (lon - self.origin_lon) * M_PER_DEG * math.cos(math.radians(self.origin_lat))
        y = (lat - self.origin_lat) * M_PER_DEG
        return x, y

    def to_latlon(self, x: float, y: float) -> tuple[float, float]:
        lat = self.origin_lat + y / M_PER_DEG
        lon = self.origin_lon + x / (M_PER_DEG * math.cos(math.radians(self.origin_lat)))
        return lat, lon

    def cell_of_xy(self, x: float, y: float) -> tuple[int, int] | None:
        """Cell containing projected point, or None when out of bounds.

        floor() puts a point on a shared edge into the larger-index cell,
        which is the stated boundary convention; the outer north/east
        edges are out of bounds.
        """
        if x < 0 or y < 0:
            return None
        col = int(math.floor(x / self.cell_size_m))
        row = int(math.floor(y / self.cell_size_m))
        if row >= self.rows or col >= self.cols:
            return None
        return row, col

    def cell_of(self, lat: float, lon: float) -> tuple[int, int] | None:
        return self.cell_of_xy(*self.to_xy(lat, lon))

    def cell_index(self, row: int, col: int) -> int:
        return row * self.cols + col

    def centroid_xy(self, row: int, col: int) -> tuple[float, float]:
        return ((col + 0.5) * self.cell_size_m, (row + 0.5) * self.cell_size_m)

    def centroid_latlon(self, row: int, col: int) -> tuple[float, float]:
        return self.to_latlon(*self.centroid_xy(row, col))

    def centroids_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat centroid arrays in row-major order."""
        cols = (np.arange(self.cols) + 0.5) * self.cell_size_m
        rows = (np.arange(self.rows) + 0.5) * self.cell_size_m
        cx = np.tile(cols, self.rows)
        cy = np.repeat(rows, self.cols)
        return cx, cy

    def cell_corners_latlon(self, row: int, col: int) -> list[tuple[float, float]]:
        """Closed ring of (lon, lat) pairs, counter-clockwise, for GeoJSON."""
        s = self.cell_size_m
        xy = [(col * s, row * s), ((col + 1) * s, row * s),
              ((col + 1) * s, (row + 1) * s), (col * s, (row + 1) * s),
              (col * s, row * s)]
        ring = []
        for x, y in xy:
            lat, lon = self.to_latlon(x, y)
            ring.append((lon, lat))
        return ring


@dataclass(frozen=True)
class BinResult:
    counts: np.ndarray                    # (rows, cols) int64
    out_of_bounds: int
    assignments: tuple                    # per point: (row, col) or None

    @property
    def total_binned(self) -> int:
        return int(self.counts.sum())


def bin_points(points, spec: GridSpec) -> BinResult:
    """Deterministically assign (lat, lon) points to grid cells.

    Out-of-bounds points are counted, never silently dropped.
    """
    counts = np.zeros((spec.rows, spec.cols), dtype=np.int64)
    assignments = []
    oob = 0
    for lat, lon in points:
        cell = spec.cell_of(lat, lon)
        assignments.append(cell)
        if cell is None:
            oob += 1
        else:
            counts[cell] += 1
    return BinResult(counts=counts, out_of_bounds=oob, assignments=tuple(assignments))
