"""Threshold badges: awarded at most once, idempotent under replay."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_POINT_NAMES = {100.0: "century", 500.0: "trailblazer", 2000.0: "legend"}


@dataclass(frozen=True)
class BadgeConfig:
    point_thresholds: tuple = (100.0, 500.0, 2000.0)
    uncharted_threshold: int = 10
    streak_threshold: int = 7
    point_names: dict = field(default_factory=lambda: dict(DEFAULT_POINT_NAMES))

    @classmethod
    def from_config(cls, cfg) -> "BadgeConfig":
        thresholds = tuple(cfg.get_floats("badges.points"))
        return cls(
            point_thresholds=thresholds,
            uncharted_threshold=cfg.get_int("badges.uncharted_cells"),
            streak_threshold=cfg.get_int("badges.streak_days"),
        )

    def point_badge_name(self, threshold: float) -> str:
        return self.point_names.get(threshold, f"points-{threshold:g}")


def award_badges(state, config: BadgeConfig = BadgeConfig()) -> set[str]:
    """Badges newly earned by the current state; already-held ones are
    never re-awarded."""
    earned = set()
    for threshold in config.point_thresholds:
        if state.points >= threshold:
            earned.add(config.point_badge_name(threshold))
    if state.uncharted_count >= config.uncharted_threshold:
        earned.add(f"explorer-{config.uncharted_threshold}")
    if state.streak_days >= config.streak_threshold:
        earned.add(f"streak-{config.streak_threshold}")
    new = earned - state.badges
    state.badges |= new
    return new
