# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the geostat hot kernels (see _kernels_py for the
reference semantics)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport pi

cnp.import_array()

BACKEND = "compiled"


def kde_grid(cx, cy, px, py, double h):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cx_ = np.ascontiguousarray(cx, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cy_ = np.ascontiguousarray(cy, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] px_ = np.ascontiguousarray(px, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] py_ = np.ascontiguousarray(py, dtype=np.float64)
    cdef Py_ssize_t n_cells = cx_.shape[0]
    cdef Py_ssize_t n_points = px_.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n_cells, dtype=np.float64)
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double coef = 2.0 / pi
    cdef Py_ssize_t i, j
    cdef double dx, dy, u2, acc
    for i in range(n_cells):
        acc = 0.0
        for j in range(n_points):
            dx = cx_[i] - px_[j]
            if dx > h or dx < -h:
                continue
            dy = cy_[i] - py_[j]
            u2 = (dx * dx + dy * dy) * inv_h2
            if u2 <= 1.0:
                acc += coef * (1.0 - u2) * inv_h2
        out[i] = acc
    return out


def window_sums(values, radius):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t rows = v.shape[0]
    cdef Py_ssize_t cols = v.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sums = np.zeros((rows, cols), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] counts = np.zeros((rows, cols), dtype=np.float64)
    cdef long r = int(radius)
    cdef double r2 = float(radius) * float(radius)
    cdef Py_ssize_t i, j, k
    cdef long dr, dc, ni, nj
    # neighborhood offsets under the Euclidean cell-distance rule
    offs = [(dr, dc) for dr in range(-r, r + 1) for dc in range(-r, r + 1)
            if dr * dr + dc * dc <= r2]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] off = np.array(offs, dtype=np.int64)
    cdef Py_ssize_t n_off = off.shape[0]
    for i in range(rows):
        for j in range(cols):
            for k in range(n_off):
                ni = i + off[k, 0]
                nj = j + off[k, 1]
                if 0 <= ni < rows and 0 <= nj < cols:
                    sums[i, j] += v[ni, nj]
                    counts[i, j] += 1.0
    return sums, counts
