"""Copied-record detection: identical value tuples across children.

The same (weight, height, muac) triple recurring for one child over time
is growth, not fraud; the same triple stamped onto several different
children by one CHW inside a short window is the classic copy pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_WINDOW_DAYS = 14.0
DEFAULT_MIN_CHILDREN = 3


@dataclass(frozen=True)
class DuplicateGroup:
    chw_id: str
    values: tuple                 # (weight, height, muac) as recorded
    measurement_ids: tuple
    child_ids: tuple              # distinct children, sorted
    first_at: object
    last_at: object
    min_children: int

    @property
    def warn(self) -> bool:
        return len(self.child_ids) >= self.min_children

    @property
    def size(self) -> int:
        return len(self.measurement_ids)


def find_duplicates(measurements, window_days: float = DEFAULT_WINDOW_DAYS,
                    min_children: int = DEFAULT_MIN_CHILDREN) -> list:
    """Group identical-tuple measurements per CHW within a sliding window.

    Only tuples with at least two recorded metrics are eligible (a lone
    rounded weight recurs honestly all the time). A group is returned when
    it spans >= 2 distinct children; ``warn`` marks groups reaching the
    alert threshold.
    """
    by_key: dict = {}
    for m in measurements:
        present = sum(v is not None for v in (m.weight, m.height, m.muac))
        if present < 2:
            continue
        by_key.setdefault((m.chw_id, m.weight, m.height, m.muac), []).append(m)

    def sort_key(kv):
        chw_id, w, h, mu = kv[0]
        return (chw_id, *((v is None, v or 0.0) for v in (w, h, mu)))

    groups = []
    window_s = window_days * 86400.0
    for (chw_id, w, h, mu), items in sorted(by_key.items(), key=sort_key):
        items.sort(key=lambda m: (m.timestamp, m.id))
        chain: list = []
        for m in items:
            if chain and (m.timestamp - chain[-1].timestamp).total_seconds() > window_s:
                groups.extend(_close_chain(chw_id, (w, h, mu), chain, min_children))
                chain = []
            chain.append(m)
        groups.extend(_close_chain(chw_id, (w, h, mu), chain, min_children))
    groups.sort(key=lambda g: (g.chw_id, g.first_at, g.measurement_ids))
    return groups


def _close_chain(chw_id, values, chain, min_children):
    if len(chain) < 2:
        return []
    children = sorted({m.child_id for m in chain})
    if len(children) < 2:
        return []
    return [DuplicateGroup(
        chw_id=chw_id, values=values,
        measurement_ids=tuple(m.id for m in chain),
        child_ids=tuple(children),
        first_at=chain[0].timestamp, last_at=chain[-1].timestamp,
        min_children=min_children,
    )]
