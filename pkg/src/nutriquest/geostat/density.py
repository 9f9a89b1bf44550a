"""Kernel density surface (points per m^2) over the grid."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from . import kernels
from .grid import GridSpec


def kde_density(points, spec: GridSpec, bandwidth_m: float) -> np.ndarray:
    """Epanechnikov KDE evaluated at cell centroids.

    Every point contributes, including points outside the grid bounds
    (their kernels may still reach in-grid centroids). An empty point set
    yields an all-zero grid.
    """
    if not bandwidth_m > 0:
        raise DomainError("bandwidth must be > 0")
    cx, cy = spec.centroids_xy()
    if not points:
        return np.zeros((spec.rows, spec.cols), dtype=np.float64)
    xy = np.array([spec.to_xy(lat, lon) for lat, lon in points], dtype=np.float64)
    dens = kernels.kde_grid(cx, cy, xy[:, 0], xy[:, 1], float(bandwidth_m))
    return dens.reshape(spec.rows, spec.cols)


def grid_mass(density: np.ndarray, spec: GridSpec) -> float:
    """Integral of the density surface over the grid (midpoint rule)."""
    return float(density.sum() * spec.cell_size_m ** 2)
