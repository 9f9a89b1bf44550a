"""Alert records produced by the screening rules."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

ALERT_KINDS = ("digit_preference", "duplicate", "velocity", "extreme_z",
               "location_mismatch", "unregistered_child")
SEVERITIES = ("info", "warn", "block")


@dataclass(frozen=True)
class Finding:
    """One rule firing, before persistence assigns it an alert id."""
    kind: str
    severity: str
    statistic: float | None
    threshold: float | None
    detail: str


@dataclass(frozen=True)
class ScreeningResult:
    findings: tuple

    @property
    def blocked(self) -> bool:
        return any(f.severity == "block" for f in self.findings)

    @property
    def warned(self) -> bool:
        return any(f.severity == "warn" for f in self.findings)

    @property
    def clean(self) -> bool:
        return not any(f.severity in ("warn", "block") for f in self.findings)

    def kinds(self) -> set[str]:
        return {f.kind for f in self.findings}


@dataclass(frozen=True)
class Alert:
    id: str
    kind: str
    severity: str
    chw_id: str
    measurement_ids: tuple
    child_id: str | None
    statistic: float | None      # evidence: observed rule statistic
    threshold: float | None      # evidence: configured limit it crossed
    detail: str
    created_at: datetime
    resolved: bool = False
    resolution: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "severity": self.severity,
            "chw_id": self.chw_id,
            "measurement_ids": list(self.measurement_ids),
            "child_id": self.child_id,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "detail": self.detail,
            "created_at": self.created_at.isoformat(),
            "resolved": self.resolved,
            "resolution": self.resolution,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Alert":
        return cls(
            id=d["id"], kind=d["kind"], severity=d["severity"],
            chw_id=d["chw_id"], measurement_ids=tuple(d["measurement_ids"]),
            child_id=d.get("child_id"), statistic=d.get("statistic"),
            threshold=d.get("threshold"), detail=d.get("detail", ""),
            created_at=datetime.fromisoformat(d["created_at"]),
            resolved=d.get("resolved", False), resolution=d.get("resolution"),
        )
