"""Per-CHW alert summaries for supervisor audits."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime


@dataclass(frozen=True)
class RiskRow:
    chw_id: str
    kind: str
    severity: str
    count: int


@dataclass(frozen=True)
class RiskReport:
    rows: tuple
    period_start: datetime | None
    period_end: datetime | None

    def for_chw(self, chw_id: str) -> list:
        return [r for r in self.rows if r.chw_id == chw_id]

    def total(self, chw_id: str) -> int:
        return sum(r.count for r in self.rows if r.chw_id == chw_id)

    def to_csv(self) -> str:
        lines = ["chw_id,kind,severity,count"]
        lines += [f"{r.chw_id},{r.kind},{r.severity},{r.count}" for r in self.rows]
        return "\n".join(lines) + "\n"


def chw_risk_report(alerts, start: datetime | None = None,
                    end: datetime | None = None) -> RiskReport:
    """Count alerts per (chw, kind, severity) within [start, end)."""
    counts: dict[tuple[str, str, str], int] = {}
    for alert in alerts:
        if start is not None and alert.created_at < start:
            continue
        if end is not None and alert.created_at >= end:
            continue
        key = (alert.chw_id, alert.kind, alert.severity)
        counts[key] = counts.get(key, 0) + 1
    rows = tuple(RiskRow(chw_id=c, kind=k, severity=s, count=n)
                 for (c, k, s), n in sorted(counts.items()))
    return RiskReport(rows=rows, period_start=start, period_end=end)
