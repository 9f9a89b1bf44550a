"""Submission scoring: base x cell bonus x streak x campaign.

All constants are configuration with invented defaults; programs tune
them per site.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from ..errors import ContractViolationError, DomainError
from .state import ScoreEvent


@dataclass(frozen=True)
class RewardConfig:
    base: float = 10.0
    uncharted_mult: float = 3.0
    stale_mult: float = 2.0
    stale_days: float = 30.0
    streak_step: float = 0.1
    streak_cap: int = 10
    utc_offset_minutes: int = 0   # converts timestamps to local activity dates

    @classmethod
    def from_config(cls, cfg) -> "RewardConfig":
        return cls(
            base=cfg.get_float("rewards.base"),
            uncharted_mult=cfg.get_float("rewards.uncharted_mult"),
            stale_mult=cfg.get_float("rewards.stale_mult"),
            stale_days=cfg.get_float("rewards.stale_days"),
            streak_step=cfg.get_float("rewards.streak_step"),
            streak_cap=cfg.get_int("rewards.streak_cap"),
            utc_offset_minutes=cfg.get_int("streak.utc_offset_minutes"),
        )

    def activity_date(self, ts: datetime):
        return (ts.astimezone(timezone.utc)
                + timedelta(minutes=self.utc_offset_minutes)).date()


@dataclass(frozen=True)
class Campaign:
    id: str
    name: str
    start: datetime
    end: datetime
    multiplier: float = 1.0
    narrative_stage: int = 0       # progressive storyline step
    cells: tuple = ()              # optional target cell indices

    def __post_init__(self):
        if self.end <= self.start:
            raise DomainError(f"campaign {self.id}: end must be after start")
        if self.multiplier < 1.0:
            raise DomainError(f"campaign {self.id}: multiplier must be >= 1")

    def active_at(self, ts: datetime) -> bool:
        return self.start <= ts < self.end


@dataclass(frozen=True)
class CellContext:
    """What scoring needs to know about the submission's grid cell."""
    uncharted: bool
    staleness_days: float | None


def cell_bonus(ctx: CellContext, config: RewardConfig) -> tuple[str, float]:
    if ctx.uncharted:
        return "uncharted", config.uncharted_mult
    if ctx.staleness_days is not None and ctx.staleness_days > config.stale_days:
        return "stale", config.stale_mult
    return "normal", 1.0


def streak_multiplier(streak_days: int, config: RewardConfig) -> float:
    return 1.0 + config.streak_step * min(streak_days, config.streak_cap)


def campaign_multiplier(campaigns, ts: datetime) -> tuple[str | None, float]:
    """At most one campaign multiplier applies: the maximum active one."""
    best_id, best = None, 1.0
    for c in campaigns:
        if c.active_at(ts) and c.multiplier > best:
            best_id, best = c.id, c.multiplier
    return best_id, best


def score_submission(measurement, ctx: CellContext, state, campaigns=(),
                     config: RewardConfig = RewardConfig(),
                     screening=None) -> ScoreEvent:
    """Build the ScoreEvent for a screened, accepted measurement.

    ``screening`` is the integrity verdict for the measurement; scoring a
    blocked or unscreened measurement is a contract violation. The streak
    multiplier reads the state as-is; the caller applies the returned
    event afterwards, which is what advances the streak.
    """
    if screening is None:
        raise ContractViolationError(
            f"measurement {measurement.id} was not screened")
    if getattr(screening, "blocked", True):
        raise ContractViolationError(
            f"measurement {measurement.id} is blocked from scoring")
    kind, bonus = cell_bonus(ctx, config)
    smult = streak_multiplier(state.streak_days, config)
    campaign_id, cmult = campaign_multiplier(campaigns, measurement.timestamp)
    points = config.base * bonus * smult * cmult
    return ScoreEvent(
        measurement_id=measurement.id,
        chw_id=measurement.chw_id,
        points=points,
        base=config.base,
        cell_bonus_kind=kind,
        cell_bonus=bonus,
        streak_multiplier=smult,
        campaign_multiplier=cmult,
        campaign_id=campaign_id,
        timestamp=measurement.timestamp,
        activity_date=config.activity_date(measurement.timestamp),
    )
