"""Pure numpy implementations of the geostat hot kernels.

Semantics must match nutriquest.geostat._kernels (the compiled twin) to
float tolerance; the benchmark and the equivalence tests compare both.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def kde_grid(cx: np.ndarray, cy: np.ndarray, px: np.ndarray, py: np.ndarray,
             h: float) -> np.ndarray:
    """Epanechnikov density at cell centroids: sum_i K(d_i/h)/h^2 with
    K(u) = (2/pi)(1-u^2) on u <= 1.

    Vectorized point-chunked accumulation; O(n_cells * n_points).
    """
    out = np.zeros(len(cx), dtype=np.float64)
    if len(px) == 0:
        return out
    cx = np.asarray(cx, dtype=np.float64)
    cy = np.asarray(cy, dtype=np.float64)
    inv_h2 = 1.0 / (h * h)
    chunk = max(1, int(2_000_000 / max(len(cx), 1)))
    for start in range(0, len(px), chunk):
        dx = cx[:, None] - np.asarray(px[start:start + chunk], dtype=np.float64)[None, :]
        dy = cy[:, None] - np.asarray(py[start:start + chunk], dtype=np.float64)[None, :]
        u2 = (dx * dx + dy * dy) * inv_h2
        contrib = np.where(u2 <= 1.0, (2.0 / np.pi) * (1.0 - u2) * inv_h2, 0.0)
        out += contrib.sum(axis=1)
    return out


def window_sums(values: np.ndarray, radius: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell neighborhood sum and neighbor count under binary weights.

    Neighborhood: cells whose (row, col) offset satisfies
    dr^2 + dc^2 <= radius^2, self included (radius 0 = self only).
    Returns (sums, counts) with the same (rows, cols) shape as values.
    """
    values = np.asarray(values, dtype=np.float64)
    rows, cols = values.shape
    sums = np.zeros_like(values)
    counts = np.zeros_like(values)
    r = int(radius)
    for dr in range(-r, r + 1):
        for dc in range(-r, r + 1):
            if dr * dr + dc * dc > radius * radius:
                continue
            if abs(dr) >= rows or abs(dc) >= cols:
                continue
            src_r = slice(max(0, -dr), rows - max(0, dr))
            dst_r = slice(max(0, dr), rows - max(0, -dr))
            src_c = slice(max(0, -dc), cols - max(0, dc))
            dst_c = slice(max(0, dc), cols - max(0, -dc))
            sums[dst_r, dst_c] += values[src_r, src_c]
            counts[dst_r, dst_c] += 1.0
    return sums, counts
