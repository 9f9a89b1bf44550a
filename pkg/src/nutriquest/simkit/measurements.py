"""Measurement-stream simulation with optional rule-violating injections.

Observed values are the reference inverses of (latent z + noise), clipped
to the configured clamp, so clean streams stay inside every plausibility
limit by construction. Each fraud kind is injected so that its detector
must fire: whole-unit rounding for digit stuffing, identical tuples
across >= 3 children for duplicates, an exact 3 cm height drop against
the child's final visit for velocity, and a z = -7 weight for extreme-z.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta

import numpy as np

from ..anthro import Indicator, bundled_reference, inverse_zscore
from ..platform.registry import Registry
from .config import SimConfig

EXTREME_PLANT_Z = -7.0
VELOCITY_DROP_CM = 3.0
DUPLICATE_GAP_MIN = 7


def restricted_inverse(z: float, row) -> float:
    """Value whose *restricted* z-score equals z (weight-based indicators
    compress |z| > 3 onto a linear tail, so the plain inverse would land
    short of the intended extreme)."""
    if z > 3.0:
        sd3 = inverse_zscore(3.0, row)
        sd2 = inverse_zscore(2.0, row)
        return sd3 + (z - 3.0) * (sd3 - sd2)
    if z < -3.0:
        sd3n = inverse_zscore(-3.0, row)
        sd2n = inverse_zscore(-2.0, row)
        return sd3n + (z + 3.0) * (sd2n - sd3n)
    return inverse_zscore(z, row)


@dataclass(frozen=True)
class SimulatedStream:
    payloads: tuple          # measurement payload dicts, timestamp order
    manifest: tuple          # dicts {kind, chw_id, measurement_id}
    observed_z: dict         # measurement_id -> {waz, haz, muacz} as generated


def _observed_values(reference, sex, age_days, zs, cfg):
    """Reference inverses for (waz, haz, muacz) observations."""
    wfa = reference.lookup(Indicator.WFA, sex, age_days)
    hfa = reference.lookup(Indicator.HFA, sex, age_days)
    muacfa = reference.lookup(Indicator.MUACFA, sex, age_days)
    weight = inverse_zscore(zs["waz"], wfa)
    height = inverse_zscore(zs["haz"], hfa)
    muac = inverse_zscore(zs["muacz"], muacfa)
    if cfg.round_values:
        weight, height, muac = round(weight, 1), round(height, 1), round(muac, 0)
    return weight, height, muac


def simulate_measurements(cfg: SimConfig, registry: Registry, latent: dict,
                          reference=None) -> SimulatedStream:
    """Deterministic visit schedule plus the configured fraud plan."""
    reference = reference or bundled_reference()
    rng = np.random.default_rng(cfg.seed + 1)
    spec = cfg.grid_spec()

    chw_ids = sorted(registry.chws)
    digit_chws = set(chw_ids[:cfg.fraud_digit_chws])
    children_by_chw = {cid: registry.children_of(cid) for cid in chw_ids}

    records = []     # mutable dicts pre-id
    seq = 0

    def new_id():
        nonlocal seq
        seq += 1
        return f"m{seq:06d}"

    def make_record(child, ts, zs, chw_id):
        age = float((ts.date() - child.birth_date).days)
        weight, height, muac = _observed_values(reference, child.sex, age, zs, cfg)
        if chw_id in digit_chws:
            # digit stuffing: every terminal digit forced to zero
            weight = float(round(weight))
            height = float(round(height))
            muac = float(round(muac, -1))
        jitter = rng.uniform(-0.0004, 0.0004, size=2)
        duration = max(30.0, float(rng.normal(cfg.entry_duration_mean_s,
                                              cfg.entry_duration_sd_s)))
        return {
            "id": new_id(), "child_id": child.id, "chw_id": chw_id,
            "timestamp": ts.isoformat(),
            "lat": child.home_lat + float(jitter[0]),
            "lon": child.home_lon + float(jitter[1]),
            "weight": weight, "height": height,
            "height_mode": "recumbent" if age < 731 else "standing",
            "muac": muac, "entry_duration": round(duration, 1),
        }, zs

    observed_z = {}
    manifest = []

    # --- honest schedule ----------------------------------------------------
    last_visit = {}      # child_id -> record
    last_day = {}        # child_id -> schedule day, enforces the revisit gap
    for day in range(cfg.days):
        for chw_id in chw_ids:
            assigned = [c for c in children_by_chw[chw_id]
                        if day - last_day.get(c.id, -10 ** 6)
                        >= cfg.visit_revisit_gap_days]
            if not assigned:
                continue
            k = min(len(assigned), int(rng.poisson(cfg.visits_per_chw_per_day)))
            if k == 0:
                continue
            picks = rng.choice(len(assigned), size=k, replace=False)
            minutes = np.sort(rng.uniform(0, 8 * 60, size=k))
            for slot, idx in enumerate(np.sort(picks)):
                child = assigned[int(idx)]
                last_day[child.id] = day
                ts = cfg.start + timedelta(days=day, minutes=float(minutes[slot]))
                zs = {axis: float(np.clip(latent[child.id]
                                          + cfg.noise_sd * rng.standard_normal(),
                                          cfg.latent_clamp[0], cfg.latent_clamp[1]))
                      for axis in ("waz", "haz", "muacz")}
                record, zs = make_record(child, ts, zs, chw_id)
                records.append(record)
                observed_z[record["id"]] = zs
                last_visit[child.id] = record

    if cfg.fraud_digit_chws:
        for chw_id in sorted(digit_chws):
            manifest.append({"kind": "digit_preference", "chw_id": chw_id,
                             "measurement_id": None})

    # --- duplicate injection ---------------------------------------------------
    non_digit = [c for c in chw_ids if c not in digit_chws] or chw_ids
    for g in range(cfg.fraud_duplicate_groups):
        chw_id = non_digit[g % len(non_digit)]
        pool = sorted(children_by_chw[chw_id], key=lambda c: c.birth_date)
        size = cfg.fraud_duplicate_size
        start_idx = (g * size) % max(1, len(pool) - size + 1)
        group = pool[start_idx:start_idx + size]
        if len(group) < size:
            continue
        donor = group[len(group) // 2]
        base_ts = cfg.start + timedelta(days=cfg.days + 1 + g,
                                        hours=10)
        zs = {axis: float(np.clip(latent[donor.id], *cfg.latent_clamp))
              for axis in ("waz", "haz", "muacz")}
        donor_age = float((base_ts.date() - donor.birth_date).days)
        weight, height, muac = _observed_values(reference, donor.sex, donor_age,
                                                zs, cfg)
        for i, child in enumerate(group):
            ts = base_ts + timedelta(minutes=i * DUPLICATE_GAP_MIN)
            jitter = rng.uniform(-0.0004, 0.0004, size=2)
            record = {
                "id": new_id(), "child_id": child.id, "chw_id": chw_id,
                "timestamp": ts.isoformat(),
                "lat": child.home_lat + float(jitter[0]),
                "lon": child.home_lon + float(jitter[1]),
                "weight": weight, "height": height,
                "height_mode": "recumbent", "muac": muac,
                "entry_duration": 45.0,
            }
            records.append(record)
            observed_z[record["id"]] = dict(zs)
            manifest.append({"kind": "duplicate", "chw_id": chw_id,
                             "measurement_id": record["id"]})

    # --- velocity injection -------------------------------------------------------
    measured_children = sorted(last_visit)
    for i in range(cfg.fraud_velocity_count):
        if not measured_children:
            break
        child_id = measured_children[(i * 7) % len(measured_children)]
        measured_children.remove(child_id)
        prior = last_visit[child_id]
        if prior["height"] is None:
            continue
        child = registry.children[child_id]
        from datetime import datetime
        prior_ts = datetime.fromisoformat(prior["timestamp"])
        ts = prior_ts + timedelta(days=3)
        record = dict(prior)
        record["id"] = new_id()
        record["timestamp"] = ts.isoformat()
        record["height"] = round(prior["height"] - VELOCITY_DROP_CM, 1)
        records.append(record)
        observed_z[record["id"]] = dict(observed_z[prior["id"]])
        manifest.append({"kind": "velocity", "chw_id": record["chw_id"],
                         "measurement_id": record["id"]})

    # --- extreme-z injection ---------------------------------------------------------
    all_children = sorted(registry.children)
    for i in range(cfg.fraud_extreme_count):
        child = registry.children[all_children[(i * 11) % len(all_children)]]
        ts = cfg.start + timedelta(days=cfg.days + 10, hours=9, minutes=i * 5)
        age = float((ts.date() - child.birth_date).days)
        wfa = reference.lookup(Indicator.WFA, child.sex, age)
        weight = restricted_inverse(EXTREME_PLANT_Z, wfa)
        record = {
            "id": new_id(), "child_id": child.id, "chw_id": child.chw_id,
            "timestamp": ts.isoformat(),
            "lat": child.home_lat, "lon": child.home_lon,
            "weight": round(weight, 1) if cfg.round_values else weight,
            "height": None, "height_mode": "standing", "muac": None,
            "entry_duration": 60.0,
        }
        records.append(record)
        observed_z[record["id"]] = {"waz": EXTREME_PLANT_Z, "haz": None,
                                    "muacz": None}
        manifest.append({"kind": "extreme_z", "chw_id": child.chw_id,
                         "measurement_id": record["id"]})

    records.sort(key=lambda r: (r["timestamp"], r["id"]))
    return SimulatedStream(payloads=tuple(records), manifest=tuple(manifest),
                           observed_z=observed_z)
