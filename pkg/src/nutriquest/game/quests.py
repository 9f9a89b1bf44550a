"""Quest generation from coverage maps.

Uncharted cells outrank everything (infinite staleness rank); stale cells
rank by staleness. Ties prefer cells farther from the CHW's home (remote
areas are the ones the incentive exists for), then the lower cell index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta

from ..errors import DomainError
from ..geostat.coverage import CoverageGrid
from .scoring import RewardConfig


@dataclass(frozen=True)
class Quest:
    id: str
    target_row: int
    target_col: int
    target_index: int
    kind: str                  # uncharted | stale | campaign
    bonus_multiplier: float
    generated_at: datetime
    expires_at: datetime

    def __post_init__(self):
        if self.expires_at <= self.generated_at:
            raise DomainError(f"quest {self.id}: expires_at must be after generation")
        if self.bonus_multiplier < 1.0:
            raise DomainError(f"quest {self.id}: bonus multiplier must be >= 1")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "target_row": self.target_row,
            "target_col": self.target_col,
            "target_index": self.target_index,
            "kind": self.kind,
            "bonus_multiplier": self.bonus_multiplier,
            "generated_at": self.generated_at.isoformat(),
            "expires_at": self.expires_at.isoformat(),
        }


def generate_quests(coverage: CoverageGrid, chw_home: tuple[float, float],
                    max_quests: int, now: datetime,
                    config: RewardConfig = RewardConfig(),
                    expiry_days: float = 7.0) -> list:
    """Top-ranked quest-worthy cells for one CHW; deterministic.

    Ranking is lexicographic on (staleness rank, distance from home,
    cell index): uncharted = infinite rank, staleness in days otherwise,
    greater distance wins ties, lower index settles the rest. Fresh cells
    (within the staleness threshold) generate nothing.
    """
    if max_quests < 1:
        raise DomainError("max_quests must be >= 1")
    spec = coverage.spec
    home_xy = spec.to_xy(*chw_home)
    candidates = []
    for cell in coverage.cells:
        if cell.uncharted:
            rank = math.inf
            kind = "uncharted"
            bonus = config.uncharted_mult
        elif cell.staleness_days is not None and cell.staleness_days > config.stale_days:
            rank = cell.staleness_days
            kind = "stale"
            bonus = config.stale_mult
        else:
            continue
        cx, cy = spec.centroid_xy(cell.row, cell.col)
        distance = math.hypot(cx - home_xy[0], cy - home_xy[1])
        index = spec.cell_index(cell.row, cell.col)
        candidates.append((rank, distance, index, cell, kind, bonus))
    candidates.sort(key=lambda t: (-t[0], -t[1], t[2]))
    quests = []
    for rank, distance, index, cell, kind, bonus in candidates[:max_quests]:
        quests.append(Quest(
            id=f"q-{now.date().isoformat()}-{kind}-{index}",
            target_row=cell.row,
            target_col=cell.col,
            target_index=index,
            kind=kind,
            bonus_multiplier=bonus,
            generated_at=now,
            expires_at=now + timedelta(days=expiry_days),
        ))
    return quests
