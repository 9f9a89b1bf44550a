"""Malnutrition classification against a configurable cutoff table.

Cutoffs live in data, not code: delimited text ``axis,threshold,label``.
For z axes (stunting/wasting/underweight) a value is classified with the
label of the lowest threshold it falls under (z < threshold). For muac the
thresholds are upper bounds in mm (muac < threshold -> band), anything
above the last threshold is green.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources

from ..errors import ParseError


class Severity(str, Enum):
    NONE = "none"
    MODERATE = "moderate"
    SEVERE = "severe"


class MuacBand(str, Enum):
    GREEN = "green"
    YELLOW = "yellow"
    RED = "red"


Z_AXES = ("stunting", "wasting", "underweight")


@dataclass(frozen=True)
class Classification:
    """Per-axis verdicts. ``None`` on an axis means the input was absent;
    an absent input is never reported as healthy."""

    stunting: Severity | None
    wasting: Severity | None
    underweight: Severity | None
    muac_band: MuacBand | None

    def to_dict(self) -> dict:
        return {
            "stunting": self.stunting.value if self.stunting else None,
            "wasting": self.wasting.value if self.wasting else None,
            "underweight": self.underweight.value if self.underweight else None,
            "muac_band": self.muac_band.value if self.muac_band else None,
        }


@dataclass(frozen=True)
class ZScoreResult:
    """Computed z values plus classification. Flagged values are reported,
    never dropped."""

    waz: float | None
    haz: float | None
    whz: float | None
    muacz: float | None
    flags: frozenset[str]
    classification: Classification

    def to_dict(self) -> dict:
        return {
            "waz": self.waz,
            "haz": self.haz,
            "whz": self.whz,
            "muacz": self.muacz,
            "flags": sorted(self.flags),
            "classification": self.classification.to_dict(),
        }


class CutoffTable:
    def __init__(self, z_cutoffs: dict[str, list[tuple[float, Severity]]],
                 muac_cutoffs: list[tuple[float, MuacBand]]):
        # z thresholds sorted ascending: most severe (lowest) first
        self.z_cutoffs = {axis: sorted(cuts) for axis, cuts in z_cutoffs.items()}
        self.muac_cutoffs = sorted(muac_cutoffs)

    @classmethod
    def default(cls) -> "CutoffTable":
        path = resources.files("nutriquest.anthro").joinpath("data/default_cutoffs.csv")
        with resources.as_file(path) as p:
            return cls.load(p)

    @classmethod
    def load(cls, path) -> "CutoffTable":
        z_cutoffs: dict[str, list[tuple[float, Severity]]] = {a: [] for a in Z_AXES}
        muac_cutoffs: list[tuple[float, MuacBand]] = []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header.replace(" ", "") != "axis,threshold,label":
                raise ParseError("expected header 'axis,threshold,label'",
                                 path=str(path), line=1, column=1)
            for lineno, raw in enumerate(fh, start=2):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = [p.strip() for p in line.split(",")]
                if len(parts) != 3:
                    raise ParseError(f"expected 3 fields, got {len(parts)}",
                                     path=str(path), line=lineno, column=1)
                axis, threshold, label = parts
                try:
                    t = float(threshold)
                    if axis in Z_AXES:
                        z_cutoffs[axis].append((t, Severity(label)))
                    elif axis == "muac":
                        muac_cutoffs.append((t, MuacBand(label)))
                    else:
                        raise ValueError(f"unknown axis {axis!r}")
                except ValueError as exc:
                    raise ParseError(str(exc), path=str(path),
                                     line=lineno, column=1) from exc
        return cls(z_cutoffs, muac_cutoffs)

    def classify_z(self, axis: str, z: float | None) -> Severity | None:
        if z is None:
            return None
        for threshold, label in self.z_cutoffs.get(axis, []):
            if z < threshold:
                return label
        return Severity.NONE

    def classify_muac(self, muac_mm: float | None) -> MuacBand | None:
        if muac_mm is None:
            return None
        for threshold, band in self.muac_cutoffs:
            if muac_mm < threshold:
                return band
        return MuacBand.GREEN


def classify(cutoffs: CutoffTable, waz: float | None = None,
             haz: float | None = None, whz: float | None = None,
             muac_mm: float | None = None) -> Classification:
    """Classify each axis; absent inputs yield None, never a healthy default."""
    return Classification(
        stunting=cutoffs.classify_z("stunting", haz),
        wasting=cutoffs.classify_z("wasting", whz),
        underweight=cutoffs.classify_z("underweight", waz),
        muac_band=cutoffs.classify_muac(muac_mm),
    )
