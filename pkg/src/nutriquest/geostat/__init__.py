"""Spatial grid, density maps, Gi* hotspots, and coverage layers."""

from .coverage import CoverageCell, CoverageGrid, coverage_map
from .density import grid_mass, kde_density
from .geojson import (coverage_geojson, density_geojson, hotspot_geojson,
                      matrix_dump)
from .grid import BinResult, GridSpec, bin_points, M_PER_DEG
from .hotspot import (CLASS_LABELS, HotspotLayer, bh_adjust,
                      build_hotspot_layer, classify_cells, gi_star)
from .kernels import BACKEND, backends

__all__ = [
    "CoverageCell", "CoverageGrid", "coverage_map", "grid_mass", "kde_density",
    "coverage_geojson", "density_geojson", "hotspot_geojson", "matrix_dump",
    "BinResult", "GridSpec", "bin_points", "M_PER_DEG", "CLASS_LABELS",
    "HotspotLayer", "bh_adjust", "build_hotspot_layer", "classify_cells",
    "gi_star",
    "BACKEND", "backends",
]
