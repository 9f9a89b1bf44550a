"""Field measurement record and its validity rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from ..errors import DomainError
from ..timefmt import parse_instant

WEIGHT_RANGE_KG = (0.0, 40.0)     # exclusive lower, inclusive upper
HEIGHT_RANGE_CM = (30.0, 140.0)
MUAC_RANGE_MM = (60.0, 250.0)


class HeightMode(str, Enum):
    STANDING = "standing"    # stadiometer
    RECUMBENT = "recumbent"  # infantometer


@dataclass(frozen=True)
class Measurement:
    """One geotagged anthropometric record submitted by a CHW.

    ``id`` is client-generated and globally unique; the sync layer
    deduplicates on it.
    """

    id: str
    child_id: str
    chw_id: str
    timestamp: datetime
    lat: float
    lon: float
    weight: float | None = None       # kg
    height: float | None = None       # cm
    height_mode: HeightMode = HeightMode.STANDING
    muac: float | None = None         # mm
    entry_duration: float | None = None  # seconds from form open to submit

    def validate(self) -> None:
        problems = []
        if not self.id:
            problems.append("missing id")
        if self.timestamp.tzinfo is None:
            problems.append("timestamp must be timezone-aware UTC")
        if self.weight is None and self.height is None and self.muac is None:
            problems.append("at least one of weight/height/muac required")
        if self.weight is not None and not (WEIGHT_RANGE_KG[0] < self.weight <= WEIGHT_RANGE_KG[1]):
            problems.append(f"weight {self.weight} kg outside (0, 40]")
        if self.height is not None and not (HEIGHT_RANGE_CM[0] < self.height <= HEIGHT_RANGE_CM[1]):
            problems.append(f"height {self.height} cm outside (30, 140]")
        if self.muac is not None and not (MUAC_RANGE_MM[0] < self.muac <= MUAC_RANGE_MM[1]):
            problems.append(f"muac {self.muac} mm outside (60, 250]")
        if not -90.0 <= self.lat <= 90.0:
            problems.append(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            problems.append(f"longitude {self.lon} outside [-180, 180]")
        if self.entry_duration is not None and self.entry_duration < 0:
            problems.append("entry_duration must be >= 0")
        if problems:
            raise DomainError("; ".join(problems))

    def is_valid(self) -> bool:
        try:
            self.validate()
            return True
        except DomainError:
            return False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "child_id": self.child_id,
            "chw_id": self.chw_id,
            "timestamp": self.timestamp.astimezone(timezone.utc).isoformat(),
            "lat": self.lat,
            "lon": self.lon,
            "weight": self.weight,
            "height": self.height,
            "height_mode": self.height_mode.value,
            "muac": self.muac,
            "entry_duration": self.entry_duration,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Measurement":
        try:
            return cls(
                id=str(d["id"]),
                child_id=str(d["child_id"]),
                chw_id=str(d["chw_id"]),
                timestamp=parse_instant(d["timestamp"]),
                lat=float(d["lat"]),
                lon=float(d["lon"]),
                weight=None if d.get("weight") is None else float(d["weight"]),
                height=None if d.get("height") is None else float(d["height"]),
                height_mode=HeightMode(d.get("height_mode", "standing")),
                muac=None if d.get("muac") is None else float(d["muac"]),
                entry_duration=(None if d.get("entry_duration") is None
                                else float(d["entry_duration"])),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"malformed measurement record: {exc}") from exc
