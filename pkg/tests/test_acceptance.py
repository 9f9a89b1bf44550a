"""Acceptance suite: one test per release criterion, at the stated
tolerances. Run with -v for one pass/fail line per criterion; each test
also prints an ACCEPTANCE line visible with -s or in failure output.

Monte-Carlo oracles here simulate the actual statistical procedures and
are independent of the closed-form implementation paths they check.
"""

import hashlib
import math
import time
from datetime import timedelta

import numpy as np
import pytest
from scipy import stats

from nutriquest.analytics import PowerParams, cohens_d, sample_size, welch_t
from nutriquest.anthro import (GrowthReferenceRow, Indicator, Sex,
                               inverse_zscore, lms_zscore)
from nutriquest.config import Config
from nutriquest.game import (BadgeConfig, GameState, RewardConfig)
from nutriquest.geostat import GridSpec, gi_star, grid_mass, kde_density
from nutriquest.platform import Store, SyncBatch
from nutriquest.simkit import (SimConfig, expected_se, generate_population,
                               simulate_measurements, simulate_trial)


def ok(name):
    print(f"\nACCEPTANCE {name}: PASS")


def random_valid_row(rng):
    while True:
        L = rng.uniform(-1.0, 1.0)
        S = rng.uniform(0.02, 0.25)
        if abs(L * S) < 0.3:
            break
    M = rng.uniform(0.5, 150.0)
    return GrowthReferenceRow(indicator=Indicator.WFA, sex=Sex.M, key=100.0,
                              L=float(L), M=float(M), S=float(S))


# --- criterion 1: power analysis ------------------------------------------------

def test_criterion_power_analysis():
    t0 = time.time()
    n = sample_size(PowerParams(d=0.5, alpha=0.05, power=0.95, tails="one"))
    assert n == 88

    def mc_power(n_per_group, reps=100_000, seed=2026):
        rng = np.random.default_rng(seed)
        hits = 0
        done = 0
        crit = stats.t.ppf(0.95, 2 * n_per_group - 2)
        while done < reps:
            chunk = min(20_000, reps - done)
            x = rng.normal(0.5, 1.0, size=(chunk, n_per_group))
            y = rng.normal(0.0, 1.0, size=(chunk, n_per_group))
            sp2 = ((n_per_group - 1) * x.var(axis=1, ddof=1)
                   + (n_per_group - 1) * y.var(axis=1, ddof=1)) / (2 * n_per_group - 2)
            t = (x.mean(axis=1) - y.mean(axis=1)) / np.sqrt(sp2 * 2.0 / n_per_group)
            hits += int(np.sum(t > crit))
            done += chunk
        return hits / reps

    p87 = mc_power(87)
    p88 = mc_power(88)
    se = math.sqrt(0.95 * 0.05 / 100_000)
    assert p87 < 0.95 + 3 * se, f"MC power(87) = {p87}"
    assert p88 >= 0.95 - 3 * se, f"MC power(88) = {p88}"
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"power criterion took {elapsed:.1f} s"
    ok(f"power-analysis (n=88, MC {p87:.4f}/{p88:.4f}, {elapsed:.1f}s)")


# --- criterion 2: effect size ----------------------------------------------------

def test_criterion_effect_size():
    d = cohens_d(73.9, 14.28, 94, 54.84, 14.96, 94)
    assert d == pytest.approx(1.30, abs=0.01)
    rng = np.random.default_rng(7)
    for _ in range(200):
        m1, m2 = rng.uniform(0, 100, 2)
        s1, s2 = rng.uniform(0.5, 30, 2)
        n1, n2 = int(rng.integers(2, 200)), int(rng.integers(2, 200))
        base = cohens_d(m1, s1, n1, m2, s2, n2)
        assert cohens_d(m2, s2, n2, m1, s1, n1) == pytest.approx(-base, abs=1e-12)
        a = rng.uniform(0.1, 50)
        assert cohens_d(a * m1, a * s1, n1, a * m2, a * s2, n2) == pytest.approx(
            base, rel=1e-12)
    ok(f"effect-size (pooled d = {d:.4f})")


# --- criterion 3: trial reproduction ----------------------------------------------

def test_criterion_trial_reproduction():
    cfg = SimConfig.from_values({})
    assert cfg.trial_n_per_arm == 94
    significant = 0
    cells_total = 0
    cells_within = 0
    for seed in range(100):
        records = simulate_trial(cfg.with_seed(seed))
        scores = {}
        for chw, group, phase, score in records:
            scores.setdefault((group, phase), []).append(score)
        res = welch_t(scores[("IG", "post")], scores[("CG", "post")])
        if res.p < 0.05:
            significant += 1
        for (group, phase), values in scores.items():
            mean, _ = cfg.trial_params[(group, phase)]
            se = expected_se(cfg, group, phase)
            cells_total += 1
            if abs(np.mean(values) - mean) <= 3 * se:
                cells_within += 1
    assert significant >= 95, f"significant in only {significant}/100 seeds"
    assert cells_within / cells_total >= 0.99, (
        f"means recovered in {cells_within}/{cells_total} cells")
    ok(f"trial-reproduction ({significant}/100 significant, "
       f"{cells_within}/{cells_total} recovered)")


# --- criterion 4: z-score engine ----------------------------------------------------

def test_criterion_zscore_engine():
    rng = np.random.default_rng(11)
    # exact zero at the median
    for _ in range(100):
        row = random_valid_row(rng)
        assert lms_zscore(row.M, row) == 0.0
    # forward/inverse round trip over 10^4 random valid rows
    worst = 0.0
    for _ in range(10_000):
        row = random_valid_row(rng)
        z = rng.uniform(-3.0, 3.0)
        back = lms_zscore(inverse_zscore(z, row), row)
        worst = max(worst, abs(back - z))
    assert worst < 1e-9, f"worst round-trip error {worst}"
    # restricted adjustment continuous at |z| = 3
    for _ in range(500):
        row = random_valid_row(rng)
        for boundary in (3.0, -3.0):
            x_b = inverse_zscore(boundary, row)
            assert abs(lms_zscore(x_b, row) - boundary) < 1e-9
    # monotonicity across the restriction boundary
    for _ in range(200):
        row = random_valid_row(rng)
        zs = [lms_zscore(x, row) for x in
              (inverse_zscore(z, row) for z in np.linspace(-2.9, 2.9, 25))]
        assert all(a < b for a, b in zip(zs, zs[1:]))
        lo = inverse_zscore(-2.999, row)
        hi = inverse_zscore(2.999, row)
        for x0, x1 in ((lo * 0.8, lo), (hi, hi * 1.2)):
            assert lms_zscore(x0, row) < lms_zscore(x1, row)
    ok(f"zscore-engine (worst round trip {worst:.2e})")


# --- criterion 5: geostatistics --------------------------------------------------------

def test_criterion_geostatistics():
    t0 = time.time()
    gi, p = gi_star(np.full((6, 6), 2.5), radius=1)
    assert np.all(gi == 0.0)

    def gi_oracle(values, radius):
        values = np.asarray(values, dtype=float)
        rows, cols = values.shape
        n = values.size
        xbar = values.mean()
        s = math.sqrt((values ** 2).mean() - xbar ** 2)
        out = np.zeros_like(values)
        for r in range(rows):
            for c in range(cols):
                wx = w = 0.0
                for rr in range(rows):
                    for cc in range(cols):
                        if (rr - r) ** 2 + (cc - c) ** 2 <= radius ** 2:
                            wx += values[rr, cc]
                            w += 1.0
                denom = s * math.sqrt((n * w - w * w) / (n - 1))
                out[r, c] = 0.0 if denom == 0 else (wx - xbar * w) / denom
        return out

    rng = np.random.default_rng(3)
    for _ in range(50):
        values = rng.normal(size=(5, 5))
        radius = int(rng.integers(0, 3))
        gi, _ = gi_star(values, radius)
        assert np.max(np.abs(gi - gi_oracle(values, radius))) < 1e-9
        a = rng.uniform(0.1, 10)
        b = rng.uniform(-10, 10)
        gi2, _ = gi_star(a * values + b, radius)
        assert np.max(np.abs(gi - gi2)) < 1e-9

    h = 100.0
    spec = GridSpec(origin_lat=19.0, origin_lon=72.8, cell_size_m=h / 10,
                    rows=60, cols=60)
    pts = [spec.to_latlon(rng.uniform(h, 500), rng.uniform(h, 500))
           for _ in range(40)]
    density = kde_density(pts, spec, h)
    mass = grid_mass(density, spec)
    assert mass == pytest.approx(40.0, rel=0.01)
    elapsed = time.time() - t0
    assert elapsed < 30.0, f"geostat criterion took {elapsed:.1f} s"
    ok(f"geostatistics (KDE mass {mass:.3f}/40, {elapsed:.1f}s)")


# --- criterion 6: integrity -------------------------------------------------------------

def ingest_stream(cfg, registry, stream, log_path=None):
    config = Config({
        "grid.origin_lat": str(cfg.grid_origin[0]),
        "grid.origin_lon": str(cfg.grid_origin[1]),
        "grid.cell_size_m": str(cfg.grid_cell_size_m),
        "grid.rows": str(cfg.grid_rows), "grid.cols": str(cfg.grid_cols),
    })
    store = Store(config, registry, log_path=log_path)
    by_chw = {}
    for payload in stream.payloads:
        by_chw.setdefault(payload["chw_id"], []).append(payload)
    for chw_id, payloads in sorted(by_chw.items()):
        store.submit_batch(SyncBatch(batch_id=f"b-{chw_id}", chw_id=chw_id,
                                     client_timestamp=cfg.start,
                                     measurements=tuple(payloads)))
    return store

def test_criterion_integrity():
    # planted violations: every injected item must be flagged
    cfg = SimConfig.from_values({
        "fraud.digit_chws": "1", "fraud.duplicate_groups": "3",
        "fraud.velocity_count": "5", "fraud.extreme_count": "4",
    })
    registry, latent = generate_population(cfg)
    stream = simulate_measurements(cfg, registry, latent)
    store = ingest_stream(cfg, registry, stream)
    flagged_by_kind = {}
    for alert in store.alerts:
        flagged_by_kind.setdefault(alert.kind, set()).update(alert.measurement_ids)
    digit_chws = {a.chw_id for a in store.alerts if a.kind == "digit_preference"}
    planted_total = 0
    caught = 0
    for entry in stream.manifest:
        planted_total += 1
        if entry["kind"] == "digit_preference":
            caught += entry["chw_id"] in digit_chws
        else:
            caught += (entry["measurement_id"]
                       in flagged_by_kind.get(entry["kind"], set()))
    assert planted_total == 1 + 3 * cfg.fraud_duplicate_size + 5 + 4
    assert caught == planted_total, f"recall {caught}/{planted_total}"

    # clean data over 20 seeds: no block-severity alerts at all
    clean_cfg = SimConfig.from_values({
        "n_children": "120", "n_chws": "4", "days": "12",
        "visits_per_chw_per_day": "8",
    })
    blocks = 0
    for seed in range(20):
        c = clean_cfg.with_seed(seed)
        reg, lat = generate_population(c)
        s = simulate_measurements(c, reg, lat)
        assert s.manifest == ()
        st = ingest_stream(c, reg, s)
        blocks += sum(1 for a in st.alerts if a.severity == "block")
    assert blocks == 0, f"{blocks} false blocks on clean data"
    ok(f"integrity (recall {caught}/{planted_total}, 0 false blocks/20 seeds)")


# --- criterion 7: platform --------------------------------------------------------------

def test_criterion_platform(tmp_path):
    cfg = SimConfig.from_values({"n_children": "900", "n_chws": "8",
                                 "days": "60", "visits_per_chw_per_day": "35",
                                 "visit_revisit_gap_days": "3"})
    registry, latent = generate_population(cfg)
    stream = simulate_measurements(cfg, registry, latent)
    assert len(stream.payloads) >= 10_000, "fixture must reach 10^4 measurements"

    config = Config({
        "grid.origin_lat": str(cfg.grid_origin[0]),
        "grid.origin_lon": str(cfg.grid_origin[1]),
        "grid.cell_size_m": str(cfg.grid_cell_size_m),
        "grid.rows": str(cfg.grid_rows), "grid.cols": str(cfg.grid_cols),
    })
    log_path = tmp_path / "records.log"
    store = Store(config, registry, log_path=log_path)
    batches = []
    chunk = 250
    payloads = list(stream.payloads)
    for i in range(0, len(payloads), chunk):
        group = payloads[i:i + chunk]
        by_chw = {}
        for p in group:
            by_chw.setdefault(p["chw_id"], []).append(p)
        for chw_id, ps in sorted(by_chw.items()):
            batches.append(SyncBatch(batch_id=f"b{i}-{chw_id}", chw_id=chw_id,
                                     client_timestamp=cfg.start,
                                     measurements=tuple(ps)))
    for b in batches:
        store.submit_batch(b)
    digest = hashlib.sha256(log_path.read_bytes()).hexdigest()
    snapshot = store.snapshot()

    # replaying arbitrary batch prefixes leaves the log byte-identical
    for prefix_len in (1, len(batches) // 3, len(batches) // 2, len(batches)):
        for b in batches[:prefix_len]:
            outcomes = store.submit_batch(b)
            assert all(o["status"] == "duplicate" for o in outcomes)
        assert hashlib.sha256(log_path.read_bytes()).hexdigest() == digest
    store.close()

    # crash-recovery rebuild reproduces every ledger exactly
    rebuilt = Store(config, registry, log_path=log_path)
    assert rebuilt.snapshot() == snapshot
    rebuilt.close()
    ok(f"platform ({len(payloads)} measurements, prefix replays byte-identical, "
       "rebuild exact)")


# --- criterion 8: game engine ------------------------------------------------------------

def test_criterion_game_engine():
    from datetime import datetime, timezone
    from dataclasses import dataclass
    from nutriquest.anthro import Measurement
    from nutriquest.game import CellContext, score_submission
    from nutriquest.geostat.coverage import CoverageCell, CoverageGrid
    from nutriquest.game import generate_quests

    @dataclass
    class Screened:
        blocked: bool = False

    now = datetime(2026, 4, 1, 9, 0, tzinfo=timezone.utc)

    def meas(mid, ts):
        return Measurement(id=mid, child_id="c", chw_id="w", timestamp=ts,
                           lat=19.0, lon=72.8, weight=10.0)

    # scoring fixtures at the stated constants
    s0 = GameState(chw_id="w")
    assert score_submission(meas("a", now), CellContext(False, None), s0,
                            screening=Screened()).points == 10.0
    assert score_submission(meas("b", now), CellContext(True, None), s0,
                            screening=Screened()).points == 30.0
    from nutriquest.game import Campaign
    s5 = GameState(chw_id="w", streak_days=5)
    camp = Campaign(id="x", name="x", start=now - timedelta(days=1),
                    end=now + timedelta(days=1), multiplier=1.5)
    assert score_submission(meas("c", now), CellContext(False, 40.0), s5,
                            campaigns=[camp],
                            screening=Screened()).points == pytest.approx(45.0)

    # ledger replay reconstruction equality over a long mixed history
    live = GameState(chw_id="w")
    events = []
    for i in range(400):
        ts = now + timedelta(days=i // 6, minutes=i)
        ev = score_submission(meas(f"m{i}", ts),
                              CellContext(i % 5 == 0, 40.0 if i % 7 == 0 else 2.0),
                              live, screening=Screened())
        live.apply(ev, BadgeConfig())
        events.append(ev)
    replayed = GameState.replay("w", events, BadgeConfig())
    assert (replayed.points, replayed.streak_days, replayed.badges,
            replayed.uncharted_count) == (live.points, live.streak_days,
                                          live.badges, live.uncharted_count)
    assert replayed.points == pytest.approx(sum(e.points for e in events))

    # quest ranking equals the exhaustive oracle on a 20-cell fixture
    spec = GridSpec(origin_lat=19.0, origin_lon=72.8, cell_size_m=100.0,
                    rows=4, cols=5)
    layout = {(0, 0): None, (1, 1): None, (3, 4): None, (0, 2): 45.0,
              (2, 2): 45.0, (1, 4): 60.0, (2, 0): 31.0, (0, 4): 12.0}
    cells = []
    for r in range(4):
        for c in range(5):
            staleness = layout.get((r, c), 0.0)
            if staleness is None:
                cells.append(CoverageCell(r, c, 2, 0, None, None))
            else:
                cells.append(CoverageCell(r, c, 2, 1,
                                          now - timedelta(days=staleness),
                                          staleness))
    grid = CoverageGrid(spec=spec, cells=tuple(cells), generated_at=now,
                        window_days=30)
    home = (19.0002, 72.8002)
    quests = generate_quests(grid, home, 5, now)
    hx, hy = spec.to_xy(*home)
    oracle = []
    for cell in cells:
        if cell.uncharted:
            rank = math.inf
        elif cell.staleness_days is not None and cell.staleness_days > 30.0:
            rank = cell.staleness_days
        else:
            continue
        cx, cy = spec.centroid_xy(cell.row, cell.col)
        oracle.append((rank, math.hypot(cx - hx, cy - hy),
                       spec.cell_index(cell.row, cell.col)))
    oracle.sort(key=lambda t: (-t[0], -t[1], t[2]))
    assert [q.target_index for q in quests] == [i for _, _, i in oracle[:5]]
    ok("game-engine (ledger replay, 10/30/45 fixtures, quest oracle)")
