"""Per-CHW game state backed by an append-only score-event ledger.

The ledger is the source of truth: replaying it from an empty state must
reproduce points, streaks and badges exactly, so every event carries its
full scoring breakdown and its local activity date.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime

from ..errors import ContractViolationError

CELL_BONUS_KINDS = ("normal", "stale", "uncharted")


@dataclass(frozen=True)
class ScoreEvent:
    measurement_id: str
    chw_id: str
    points: float
    base: float
    cell_bonus_kind: str          # one of CELL_BONUS_KINDS
    cell_bonus: float
    streak_multiplier: float
    campaign_multiplier: float
    campaign_id: str | None
    timestamp: datetime
    activity_date: date

    def to_dict(self) -> dict:
        return {
            "measurement_id": self.measurement_id,
            "chw_id": self.chw_id,
            "points": self.points,
            "base": self.base,
            "cell_bonus_kind": self.cell_bonus_kind,
            "cell_bonus": self.cell_bonus,
            "streak_multiplier": self.streak_multiplier,
            "campaign_multiplier": self.campaign_multiplier,
            "campaign_id": self.campaign_id,
            "timestamp": self.timestamp.isoformat(),
            "activity_date": self.activity_date.isoformat(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreEvent":
        return cls(
            measurement_id=d["measurement_id"],
            chw_id=d["chw_id"],
            points=float(d["points"]),
            base=float(d["base"]),
            cell_bonus_kind=d["cell_bonus_kind"],
            cell_bonus=float(d["cell_bonus"]),
            streak_multiplier=float(d["streak_multiplier"]),
            campaign_multiplier=float(d["campaign_multiplier"]),
            campaign_id=d.get("campaign_id"),
            timestamp=datetime.fromisoformat(d["timestamp"]),
            activity_date=date.fromisoformat(d["activity_date"]),
        )


@dataclass
class GameState:
    chw_id: str
    points: float = 0.0
    streak_days: int = 0
    last_active: date | None = None
    badges: set[str] = field(default_factory=set)
    team_id: str | None = None
    opted_out: bool = False       # hidden from the individual board
    uncharted_count: int = 0      # uncharted-cell submissions, drives a badge
    history: list[ScoreEvent] = field(default_factory=list)

    def update_streak(self, activity_date: date) -> None:
        """Advance the consecutive-day streak; same-day is a no-op.

        Activity dates must arrive non-decreasing.
        """
        if self.last_active is not None:
            if activity_date < self.last_active:
                raise ContractViolationError(
                    f"activity date {activity_date} precedes last active "
                    f"{self.last_active} for {self.chw_id}")
            gap = (activity_date - self.last_active).days
            if gap == 0:
                return
            self.streak_days = self.streak_days + 1 if gap == 1 else 1
        else:
            self.streak_days = 1
        self.last_active = activity_date

    def apply(self, event: ScoreEvent, badge_config=None) -> set[str]:
        """Append one ledger event; returns any newly earned badges."""
        if event.chw_id != self.chw_id:
            raise ContractViolationError(
                f"event for {event.chw_id} applied to state of {self.chw_id}")
        self.points += event.points
        if event.cell_bonus_kind == "uncharted":
            self.uncharted_count += 1
        self.update_streak(event.activity_date)
        self.history.append(event)
        if badge_config is not None:
            from .badges import award_badges
            return award_badges(self, badge_config)
        return set()

    @classmethod
    def replay(cls, chw_id: str, events, badge_config=None,
               team_id: str | None = None, opted_out: bool = False) -> "GameState":
        """Rebuild a state from scratch over an event ledger."""
        state = cls(chw_id=chw_id, team_id=team_id, opted_out=opted_out)
        for event in events:
            state.apply(event, badge_config)
        return state
