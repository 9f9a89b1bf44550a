"""Per-measurement plausibility rules: extreme z, impossible velocity,
location mismatch. All thresholds come from configuration.

Only extreme_z blocks scoring automatically; everything else warns so a
supervisor decides. Genuinely malnourished children are the signal, and a
block on honest outliers would punish exactly the cases the platform
exists to find.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..anthro.classify import ZScoreResult
from ..anthro.measurement import Measurement
from ..geostat.grid import M_PER_DEG
from .alerts import Finding, ScreeningResult

DEFAULT_Z_LIMITS = {"haz": (-6.0, 6.0), "whz": (-5.0, 5.0), "waz": (-6.0, 5.0)}


@dataclass(frozen=True)
class ScreeningConfig:
    z_limits: dict = field(default_factory=lambda: dict(DEFAULT_Z_LIMITS))
    height_loss_cm: float = 1.0        # max plausible shrinkage between visits
    weight_g_per_day: float = 200.0    # max plausible daily weight change
    location_m: float = 2000.0         # max distance from registered home

    @classmethod
    def from_config(cls, cfg) -> "ScreeningConfig":
        limits = {}
        for axis in ("haz", "whz", "waz", "muacz"):
            raw = cfg.get(f"integrity.limit.{axis}")
            if raw:
                lo, hi = (float(p) for p in raw.split(","))
                limits[axis] = (lo, hi)
        return cls(
            z_limits=limits,
            height_loss_cm=cfg.get_float("integrity.velocity.height_loss_cm"),
            weight_g_per_day=cfg.get_float("integrity.velocity.weight_g_per_day"),
            location_m=cfg.get_float("integrity.location_m"),
        )


def distance_m(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Equirectangular distance, adequate at precinct scale."""
    dy = (a[0] - b[0]) * M_PER_DEG
    dx = (a[1] - b[1]) * M_PER_DEG * math.cos(math.radians(a[0]))
    return math.hypot(dx, dy)


def screen_measurement(m: Measurement, zscores: ZScoreResult,
                       history, home: tuple[float, float] | None,
                       config: ScreeningConfig = ScreeningConfig()) -> ScreeningResult:
    """Apply every per-measurement rule.

    history: the child's prior measurements, oldest first. home: the
    registered home location, or None for an unregistered child (an info
    finding, not a failure).
    """
    findings = []

    for axis, z in (("waz", zscores.waz), ("haz", zscores.haz),
                    ("whz", zscores.whz), ("muacz", zscores.muacz)):
        limits = config.z_limits.get(axis)
        if z is None or limits is None:
            continue
        lo, hi = limits
        if z < lo or z > hi:
            findings.append(Finding(
                kind="extreme_z", severity="block", statistic=z,
                threshold=lo if z < lo else hi,
                detail=f"{axis} = {z:.2f} outside [{lo}, {hi}]"))

    prior = [p for p in history if p.timestamp < m.timestamp]
    if prior:
        last = prior[-1]
        if m.height is not None and last.height is not None:
            drop = last.height - m.height
            if drop > config.height_loss_cm:
                findings.append(Finding(
                    kind="velocity", severity="warn", statistic=-drop,
                    threshold=config.height_loss_cm,
                    detail=f"height fell {drop:.1f} cm since "
                           f"{last.timestamp.date().isoformat()}"))
        if m.weight is not None and last.weight is not None:
            # floor the gap at one day so a same-day re-measure is judged
            # on its absolute change
            days = max((m.timestamp - last.timestamp).total_seconds() / 86400.0, 1.0)
            rate = abs(m.weight - last.weight) * 1000.0 / days
            if rate > config.weight_g_per_day:
                findings.append(Finding(
                    kind="velocity", severity="warn", statistic=rate,
                    threshold=config.weight_g_per_day,
                    detail=f"weight changed {rate:.0f} g/day since "
                           f"{last.timestamp.date().isoformat()}"))

    if home is None:
        findings.append(Finding(
            kind="unregistered_child", severity="info", statistic=None,
            threshold=None, detail=f"child {m.child_id} not in registry"))
    else:
        dist = distance_m((m.lat, m.lon), home)
        if dist > config.location_m:
            findings.append(Finding(
                kind="location_mismatch", severity="warn", statistic=dist,
                threshold=config.location_m,
                detail=f"measured {dist:.0f} m from registered home"))

    return ScreeningResult(findings=tuple(findings))
