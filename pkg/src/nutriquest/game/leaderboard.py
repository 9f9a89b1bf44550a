"""Individual and team leaderboards over a time period.

Opted-out CHWs are hidden from the individual board but still count
toward their team: the opt-out is a visibility choice, not a forfeit.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime


@dataclass(frozen=True)
class LeaderboardEntry:
    subject_id: str
    points: float
    rank: int


@dataclass(frozen=True)
class Leaderboard:
    individual: tuple
    teams: tuple
    period_start: datetime | None
    period_end: datetime | None


def points_in_period(state, start: datetime | None, end: datetime | None) -> float:
    total = 0.0
    for event in state.history:
        if start is not None and event.timestamp < start:
            continue
        if end is not None and event.timestamp >= end:
            continue
        total += event.points
    return total


def _ranked(scores: dict[str, float]) -> tuple:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(LeaderboardEntry(subject_id=sid, points=pts, rank=i + 1)
                 for i, (sid, pts) in enumerate(ordered))


def leaderboard(states, team_ids=(), start: datetime | None = None,
                end: datetime | None = None) -> Leaderboard:
    """Rank CHWs and teams by points earned in [start, end).

    Ties break lexicographically on id so the ordering is stable. Teams
    listed in ``team_ids`` appear even when no member scored.
    """
    individual = {}
    teams = {tid: 0.0 for tid in team_ids}
    for state in states:
        pts = points_in_period(state, start, end)
        if not state.opted_out:
            individual[state.chw_id] = pts
        if state.team_id is not None:
            teams[state.team_id] = teams.get(state.team_id, 0.0) + pts
    return Leaderboard(individual=_ranked(individual), teams=_ranked(teams),
                       period_start=start, period_end=end)
