"""Location-based game loop: scoring, quests, streaks, badges, boards."""

from .badges import BadgeConfig, award_badges
from .leaderboard import Leaderboard, LeaderboardEntry, leaderboard, points_in_period
from .quests import Quest, generate_quests
from .scoring import (Campaign, CellContext, RewardConfig, campaign_multiplier,
                      cell_bonus, score_submission, streak_multiplier)
from .state import CELL_BONUS_KINDS, GameState, ScoreEvent

__all__ = [
    "BadgeConfig", "award_badges", "Leaderboard", "LeaderboardEntry",
    "leaderboard", "points_in_period", "Quest", "generate_quests", "Campaign",
    "CellContext", "RewardConfig", "campaign_multiplier", "cell_bonus",
    "score_submission", "streak_multiplier", "CELL_BONUS_KINDS", "GameState",
    "ScoreEvent",
]
