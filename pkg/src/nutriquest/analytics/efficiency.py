"""CHW measuring-efficiency composite: accuracy, speed, coverage.

The composite definition is program policy (weights and target rate are
configuration); the components are recomputable from raw records.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np


@dataclass(frozen=True)
class EfficiencyWeights:
    w_accuracy: float = 0.5
    w_speed: float = 0.3
    w_coverage: float = 0.2
    target_per_hour: float = 12.0
    scale: float = 1.0

    @classmethod
    def from_config(cls, cfg) -> "EfficiencyWeights":
        return cls(
            w_accuracy=cfg.get_float("efficiency.w_accuracy"),
            w_speed=cfg.get_float("efficiency.w_speed"),
            w_coverage=cfg.get_float("efficiency.w_coverage"),
            target_per_hour=cfg.get_float("efficiency.target_per_hour"),
            scale=cfg.get_float("efficiency.scale"),
        )


@dataclass(frozen=True)
class EfficiencyScore:
    chw_id: str
    period_start: datetime | None
    period_end: datetime | None
    accuracy: float
    speed: float
    coverage: float
    composite: float
    n_submissions: int
    inactive: bool

    def to_dict(self) -> dict:
        return {
            "chw_id": self.chw_id,
            "period_start": self.period_start.isoformat() if self.period_start else None,
            "period_end": self.period_end.isoformat() if self.period_end else None,
            "accuracy": self.accuracy,
            "speed": self.speed,
            "coverage": self.coverage,
            "composite": self.composite,
            "n_submissions": self.n_submissions,
            "inactive": self.inactive,
        }


def efficiency_score(chw_id: str, measurements, flagged_ids: set,
                     assigned_children, weights: EfficiencyWeights = EfficiencyWeights(),
                     period_start: datetime | None = None,
                     period_end: datetime | None = None) -> EfficiencyScore:
    """Composite efficiency for one CHW over a period.

    measurements: the CHW's accepted measurements in the period.
    flagged_ids: measurement ids carrying at least one warn/block finding.
    assigned_children: ids of children assigned to the CHW.

    Accuracy = clean fraction; speed = median entries-per-hour against the
    target rate, capped at 1; coverage = assigned children measured at
    least once. Zero submissions is reported as inactive with a zero
    composite rather than an error.
    """
    ms = [m for m in measurements
          if (period_start is None or m.timestamp >= period_start)
          and (period_end is None or m.timestamp < period_end)]
    n = len(ms)
    if n == 0:
        return EfficiencyScore(chw_id=chw_id, period_start=period_start,
                               period_end=period_end, accuracy=0.0, speed=0.0,
                               coverage=0.0, composite=0.0, n_submissions=0,
                               inactive=True)

    clean = sum(1 for m in ms if m.id not in flagged_ids)
    accuracy = clean / n

    rates = [3600.0 / m.entry_duration for m in ms
             if m.entry_duration is not None and m.entry_duration > 0]
    speed = 0.0
    if rates:
        speed = min(1.0, float(np.median(rates)) / weights.target_per_hour)

    assigned = set(assigned_children)
    if assigned:
        measured = {m.child_id for m in ms} & assigned
        coverage = len(measured) / len(assigned)
    else:
        coverage = 1.0  # nothing assigned: coverage is vacuously complete

    total_w = weights.w_accuracy + weights.w_speed + weights.w_coverage
    composite = 100.0 * (weights.w_accuracy * accuracy + weights.w_speed * speed
                         + weights.w_coverage * coverage) / total_w * weights.scale
    return EfficiencyScore(chw_id=chw_id, period_start=period_start,
                           period_end=period_end, accuracy=accuracy,
                           speed=speed, coverage=coverage, composite=composite,
                           n_submissions=n, inactive=False)
