"""Geostatistics tests. Non-trivial expectations come from naive inline
oracles (direct double loops over the definitions), never from the
implementation under test."""

import math
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nutriquest.errors import DomainError
from nutriquest.geostat import (GridSpec, bin_points, build_hotspot_layer,
                                classify_cells, coverage_geojson, coverage_map,
                                gi_star, grid_mass, hotspot_geojson,
                                kde_density, matrix_dump)

UTC = timezone.utc


def make_spec(rows=10, cols=10, cell=100.0):
    return GridSpec(origin_lat=19.0, origin_lon=72.8, cell_size_m=cell,
                    rows=rows, cols=cols)


# --- independent oracles -------------------------------------------------

def kde_oracle(spec, points_xy, h):
    """Naive per-cell, per-point Epanechnikov summation."""
    out = np.zeros((spec.rows, spec.cols))
    for r in range(spec.rows):
        for c in range(spec.cols):
            cx, cy = spec.centroid_xy(r, c)
            acc = 0.0
            for px, py in points_xy:
                u = math.hypot(cx - px, cy - py) / h
                if u <= 1.0:
                    acc += (2.0 / math.pi) * (1.0 - u * u) / (h * h)
            out[r, c] = acc
    return out


def gi_oracle(values, radius):
    """Direct evaluation of the Gi* definition with binary weights."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    n = values.size
    xbar = values.mean()
    s = math.sqrt((values ** 2).mean() - xbar ** 2)
    gi = np.zeros_like(values)
    if s == 0:
        return gi, np.ones_like(values)
    p = np.ones_like(values)
    for r in range(rows):
        for c in range(cols):
            wx = 0.0
            w = 0.0
            for rr in range(rows):
                for cc in range(cols):
                    if (rr - r) ** 2 + (cc - c) ** 2 <= radius ** 2:
                        wx += values[rr, cc]
                        w += 1.0
            denom = s * math.sqrt((n * w - w * w) / (n - 1))
            gi[r, c] = 0.0 if denom == 0 else (wx - xbar * w) / denom
            p[r, c] = math.erfc(abs(gi[r, c]) / math.sqrt(2.0))
    return gi, p


# --- binning --------------------------------------------------------------

def test_bin_point_at_centroid():
    spec = make_spec()
    lat, lon = spec.centroid_latlon(3, 7)
    res = bin_points([(lat, lon)], spec)
    assert res.assignments[0] == (3, 7)
    assert res.counts[3, 7] == 1


def test_bin_shared_edge_goes_to_larger_index():
    spec = make_spec()
    # exact projected coordinates: the edge between col 4 and col 5
    assert spec.cell_of_xy(5 * spec.cell_size_m, 50.0) == (0, 5)
    # edge between row 2 and row 3
    assert spec.cell_of_xy(50.0, 3 * spec.cell_size_m) == (3, 0)
    # origin corner belongs to (0, 0); outer edges are out of bounds
    assert spec.cell_of_xy(0.0, 0.0) == (0, 0)
    assert spec.cell_of_xy(spec.cols * spec.cell_size_m, 10.0) is None
    assert spec.cell_of_xy(10.0, spec.rows * spec.cell_size_m) is None


def test_bin_thousand_points_partition():
    spec = make_spec()
    rng = np.random.default_rng(42)
    pts = []
    for _ in range(1000):
        x = rng.uniform(0, spec.cols * spec.cell_size_m * 0.999)
        y = rng.uniform(0, spec.rows * spec.cell_size_m * 0.999)
        pts.append(spec.to_latlon(x, y))
    res = bin_points(pts, spec)
    assert res.total_binned == 1000
    assert res.out_of_bounds == 0
    # recount oracle: every point lands in exactly one cell
    recount = np.zeros((spec.rows, spec.cols), dtype=int)
    for (lat, lon) in pts:
        cell = spec.cell_of(lat, lon)
        recount[cell] += 1
    assert np.array_equal(recount, res.counts)


def test_bin_out_of_bounds_counted():
    spec = make_spec(rows=2, cols=2)
    far = spec.to_latlon(10 * spec.cell_size_m, 10 * spec.cell_size_m)
    res = bin_points([far], spec)
    assert res.out_of_bounds == 1
    assert res.total_binned == 0


# --- KDE -------------------------------------------------------------------

def test_kde_peak_at_point():
    spec = make_spec(rows=5, cols=5, cell=50.0)
    h = 100.0
    lat, lon = spec.centroid_latlon(2, 2)
    dens = kde_density([(lat, lon)], spec, h)
    assert dens[2, 2] == pytest.approx(2.0 / (math.pi * h * h), rel=1e-9)


def test_kde_compact_support():
    spec = make_spec(rows=3, cols=3, cell=1000.0)
    h = 100.0
    lat, lon = spec.centroid_latlon(0, 0)
    dens = kde_density([(lat, lon)], spec, h)
    assert dens[2, 2] == 0.0


def test_kde_empty_points():
    spec = make_spec(rows=3, cols=3)
    dens = kde_density([], spec, 100.0)
    assert np.all(dens == 0.0)


def test_kde_two_points_matches_naive_oracle():
    spec = make_spec(rows=5, cols=5, cell=80.0)
    h = 150.0
    pts_xy = [(120.0, 140.0), (300.0, 310.0)]
    pts = [spec.to_latlon(x, y) for x, y in pts_xy]
    dens = kde_density(pts, spec, h)
    # oracle re-projects the same way before summing
    xy = [spec.to_xy(lat, lon) for lat, lon in pts]
    expected = kde_oracle(spec, xy, h)
    assert np.max(np.abs(dens - expected)) < 1e-12


def test_kde_nonnegative_random():
    spec = make_spec(rows=8, cols=8, cell=60.0)
    rng = np.random.default_rng(7)
    pts = [spec.to_latlon(rng.uniform(0, 480), rng.uniform(0, 480)) for _ in range(50)]
    dens = kde_density(pts, spec, 120.0)
    assert np.all(dens >= 0.0)


def test_kde_mass_conservation():
    # cell_size <= h/10 and all points >= h from the grid edge
    h = 100.0
    spec = make_spec(rows=40, cols=40, cell=10.0)  # 400 m square
    rng = np.random.default_rng(3)
    pts = [spec.to_latlon(rng.uniform(h, 400 - h), rng.uniform(h, 400 - h))
           for _ in range(25)]
    dens = kde_density(pts, spec, h)
    assert grid_mass(dens, spec) == pytest.approx(25.0, rel=0.01)


def test_kde_rejects_bad_bandwidth():
    with pytest.raises(DomainError):
        kde_density([], make_spec(), 0.0)


# --- Gi* --------------------------------------------------------------------

def test_gi_constant_field_zero():
    gi, p = gi_star(np.full((4, 4), 3.7), radius=1)
    assert np.all(gi == 0.0)
    assert np.all(p == 1.0)


def test_gi_center_hot_cell_matches_oracle():
    values = np.zeros((3, 3))
    values[1, 1] = 1.0
    gi, p = gi_star(values, radius=1)
    egi, ep = gi_oracle(values, 1)
    assert np.max(np.abs(gi - egi)) < 1e-9
    assert np.max(np.abs(p - ep)) < 1e-9
    assert gi[1, 1] > 0  # the hot center


def test_gi_random_fields_match_oracle():
    rng = np.random.default_rng(11)
    for _ in range(10):
        values = rng.normal(size=(5, 5))
        for radius in (0, 1, 2):
            gi, p = gi_star(values, radius)
            egi, ep = gi_oracle(values, radius)
            assert np.max(np.abs(gi - egi)) < 1e-9
            assert np.max(np.abs(p - ep)) < 1e-9


def test_gi_affine_invariance():
    rng = np.random.default_rng(5)
    values = rng.normal(size=(5, 5))
    gi1, _ = gi_star(values, 1)
    gi2, _ = gi_star(3.0 * values + 7.0, 1)
    assert np.max(np.abs(gi1 - gi2)) < 1e-9


@given(seed=st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_gi_affine_invariance_property(seed):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(4, 4))
    a = rng.uniform(0.1, 10.0)
    b = rng.uniform(-5.0, 5.0)
    gi1, _ = gi_star(values, 1)
    gi2, _ = gi_star(a * values + b, 1)
    assert np.max(np.abs(gi1 - gi2)) < 1e-9


def test_gi_sign_of_max_cell_whole_grid_radius():
    rng = np.random.default_rng(9)
    values = rng.normal(size=(4, 4))
    gi, _ = gi_star(values, radius=10)  # radius covers the whole grid
    r, c = np.unravel_index(np.argmax(values), values.shape)
    assert gi[r, c] >= 0.0


def test_gi_needs_two_cells():
    with pytest.raises(DomainError):
        gi_star(np.ones((1, 1)), 1)


def test_hotspot_classes_consistent():
    rng = np.random.default_rng(2)
    values = rng.normal(size=(6, 6))
    values[2, 2] += 8  # force a hot cell
    gi, p = gi_star(values, 1)
    classes = classify_cells(gi, p)
    for r in range(6):
        for c in range(6):
            label = classes[r, c]
            if label.startswith("hot"):
                assert gi[r, c] > 0
            if label.startswith("cold"):
                assert gi[r, c] < 0
            if label == "hot99":
                assert p[r, c] < 0.01
            if label == "neutral":
                assert p[r, c] >= 0.10 or gi[r, c] == 0.0


# --- coverage ---------------------------------------------------------------

NOW = datetime(2026, 4, 1, tzinfo=UTC)


def test_coverage_no_measurements_all_uncharted():
    spec = make_spec(rows=2, cols=2)
    children = [("c1", *spec.centroid_latlon(0, 0)), ("c2", *spec.centroid_latlon(1, 1))]
    grid = coverage_map(children, [], spec, window_days=30, now=NOW)
    assert all(cell.uncharted for cell in grid.cells)
    assert grid.cell(0, 0).n_children_known == 1
    assert grid.cell(0, 1).n_children_known == 0


def test_coverage_staleness_and_window():
    spec = make_spec(rows=2, cols=2)
    lat, lon = spec.centroid_latlon(0, 0)
    children = [("c1", lat, lon)]
    m45 = [("c1", lat, lon, NOW - timedelta(days=45))]
    grid = coverage_map(children, m45, spec, window_days=30, now=NOW)
    cell = grid.cell(0, 0)
    assert cell.n_measured_window == 0
    assert cell.staleness_days == pytest.approx(45.0)
    assert not cell.uncharted


def test_coverage_mixed_recount_oracle():
    spec = make_spec(rows=3, cols=3)
    rng = np.random.default_rng(8)
    children = []
    for i in range(30):
        r, c = rng.integers(0, 3), rng.integers(0, 3)
        lat, lon = spec.centroid_latlon(r, c)
        children.append((f"c{i}", lat, lon))
    measurements = []
    for i in range(0, 30, 2):
        cid, lat, lon = children[i]
        age_days = int(rng.integers(1, 60))
        measurements.append((cid, lat, lon, NOW - timedelta(days=age_days)))
    grid = coverage_map(children, measurements, spec, window_days=30, now=NOW)
    # recount oracle: direct filtering
    for r in range(3):
        for c in range(3):
            cell = grid.cell(r, c)
            homes = [cid for cid, lat, lon in children if spec.cell_of(lat, lon) == (r, c)]
            assert cell.n_children_known == len(homes)
            measured = {cid for cid, lat, lon, ts in measurements
                        if cid in homes and (NOW - ts).days <= 30}
            assert cell.n_measured_window == len(measured)
            located = [ts for cid, lat, lon, ts in measurements
                       if spec.cell_of(lat, lon) == (r, c)]
            if located:
                assert cell.last_measurement == max(located)
            else:
                assert cell.uncharted


# --- exports -----------------------------------------------------------------

def test_hotspot_geojson_shape():
    spec = make_spec(rows=2, cols=3)
    values = np.arange(6, dtype=float).reshape(2, 3)
    layer = build_hotspot_layer(values, spec, radius=1, now=NOW)
    gj = hotspot_geojson(layer)
    assert gj["type"] == "FeatureCollection"
    assert len(gj["features"]) == 6
    f0 = gj["features"][0]
    assert f0["geometry"]["type"] == "Polygon"
    ring = f0["geometry"]["coordinates"][0]
    assert len(ring) == 5 and ring[0] == ring[-1]
    for key in ("value", "gi_star", "p_value", "class"):
        assert key in f0["properties"]


def test_coverage_geojson_properties():
    spec = make_spec(rows=1, cols=1)
    grid = coverage_map([], [], spec, window_days=30, now=NOW)
    gj = coverage_geojson(grid)
    props = gj["features"][0]["properties"]
    assert props["uncharted"] is True
    assert props["staleness_days"] is None


def test_matrix_dump_format():
    out = matrix_dump(np.array([[1.0, 2.5], [3.25, 4.0]]))
    assert out == "1 2.5\n3.25 4\n"


# --- FDR correction flag -----------------------------------------------------

def test_bh_adjust_matches_scipy():
    from scipy import stats as spstats
    from nutriquest.geostat import bh_adjust
    rng = np.random.default_rng(21)
    p = rng.uniform(0, 1, size=(6, 7))
    ours = bh_adjust(p)
    scipy_ref = spstats.false_discovery_control(p.ravel(), method="bh").reshape(p.shape)
    assert np.max(np.abs(ours - scipy_ref)) < 1e-12


def test_gi_star_fdr_never_more_significant():
    rng = np.random.default_rng(4)
    values = rng.normal(size=(6, 6))
    values[1, 1] += 6
    _, p_raw = gi_star(values, 1)
    _, p_fdr = gi_star(values, 1, fdr=True)
    assert np.all(p_fdr >= p_raw - 1e-15)
    assert np.all(p_fdr <= 1.0)
