"""Local Gi* hotspot statistic over a gridded field.

Binary contiguity weights: w_ij = 1 for cells within ``radius`` in
Euclidean cell distance, self included. p-values use the standard normal
approximation, two-sided. A constant field (zero global variance) is
defined as Gi* = 0 everywhere, as is a neighborhood that spans the whole
grid (the statistic's denominator vanishes in both cases).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np
from scipy.special import erfc

from ..errors import DomainError
from . import kernels
from .grid import GridSpec

CLASS_LABELS = ("cold99", "cold95", "cold90", "neutral", "hot90", "hot95", "hot99")


def bh_adjust(p: np.ndarray) -> np.ndarray:
    """Benjamini-Hochberg adjusted p-values (any shape, adjusted in flat
    rank order)."""
    flat = np.asarray(p, dtype=np.float64).ravel()
    n = flat.size
    order = np.argsort(flat)
    adjusted = np.empty_like(flat)
    running = 1.0
    for rank in range(n - 1, -1, -1):
        idx = order[rank]
        running = min(running, flat[idx] * n / (rank + 1))
        adjusted[idx] = running
    return adjusted.reshape(np.asarray(p).shape)


def gi_star(values: np.ndarray, radius: int,
            fdr: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Gi* and two-sided p-value per cell for a (rows, cols) field.

    ``fdr`` applies the Benjamini-Hochberg correction across cells before
    any significance classing (off by default).
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise DomainError("values must be a 2-D grid")
    n = values.size
    if n < 2:
        raise DomainError("Gi* needs at least 2 cells")
    if radius < 0:
        raise DomainError("neighborhood radius must be >= 0")
    mean = values.mean()
    s = np.sqrt((values * values).mean() - mean * mean)
    if s == 0.0:
        gi = np.zeros_like(values)
        return gi, np.ones_like(values)
    wx, w = kernels.window_sums(values, radius)
    # binary weights: sum of squared weights equals the neighbor count
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = s * np.sqrt((n * w - w * w) / (n - 1))
        gi = np.where(denom > 0, (wx - mean * w) / np.where(denom > 0, denom, 1.0), 0.0)
    p = erfc(np.abs(gi) / np.sqrt(2.0))
    if fdr:
        p = bh_adjust(p)
    return gi, p


def classify_cells(gi: np.ndarray, p: np.ndarray) -> np.ndarray:
    """7-class hot/cold labels consistent with Gi* sign and p-value."""
    labels = np.full(gi.shape, "neutral", dtype=object)
    for threshold, hot, cold in ((0.01, "hot99", "cold99"),
                                 (0.05, "hot95", "cold95"),
                                 (0.10, "hot90", "cold90")):
        mask = (p < threshold) & (labels == "neutral")
        labels[mask & (gi > 0)] = hot
        labels[mask & (gi < 0)] = cold
    return labels


@dataclass(frozen=True)
class HotspotLayer:
    spec: GridSpec
    values: np.ndarray       # indicator prevalence or density per cell
    gi: np.ndarray
    p_value: np.ndarray
    classes: np.ndarray      # object array of CLASS_LABELS entries
    generated_at: datetime


def build_hotspot_layer(values: np.ndarray, spec: GridSpec, radius: int,
                        now: datetime, fdr: bool = False) -> HotspotLayer:
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (spec.rows, spec.cols):
        raise DomainError(f"field shape {values.shape} does not match grid "
                          f"({spec.rows}, {spec.cols})")
    gi, p = gi_star(values, radius, fdr=fdr)
    return HotspotLayer(spec=spec, values=values, gi=gi, p_value=p,
                        classes=classify_cells(gi, p), generated_at=now)
