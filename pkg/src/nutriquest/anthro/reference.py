"""Growth-reference tables and LMS z-score math.

A reference table is a set of (indicator, sex, key) -> (L, M, S) knots.
Age-keyed indicators use age in days; weight-for-height uses length in mm.
Tables ship as delimited text with header ``indicator,sex,key,L,M,S``; the
package bundles a synthetic table for hermetic tests and accepts full WHO
exports in the same layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DomainError, ParseError, ReferenceGapError


class Indicator(str, Enum):
    WFA = "WFA"        # weight-for-age, key = age in days
    HFA = "HFA"        # height/length-for-age, key = age in days
    WFH = "WFH"        # weight-for-height, key = length in mm
    MUACFA = "MUACFA"  # MUAC-for-age, key = age in days


class Sex(str, Enum):
    F = "F"
    M = "M"


# Weight-based indicators get the restricted z adjustment beyond |z| > 3.
WEIGHT_BASED = frozenset({Indicator.WFA, Indicator.WFH})


@dataclass(frozen=True)
class GrowthReferenceRow:
    indicator: Indicator
    sex: Sex
    key: float   # age in days, or length in mm for WFH
    L: float     # skewness power (dimensionless)
    M: float     # median, in measurement units
    S: float     # coefficient of variation (dimensionless)

    def __post_init__(self):
        if not self.M > 0:
            raise DomainError(f"reference row M must be > 0, got {self.M}")
        if not self.S > 0:
            raise DomainError(f"reference row S must be > 0, got {self.S}")


def lms_zscore(x: float, row: GrowthReferenceRow, restricted: bool = True) -> float:
    """z-score of measurement ``x`` against an LMS row.

    z = ((x/M)^L - 1) / (L*S) for L != 0, ln(x/M)/S for L = 0.  For
    weight-based indicators the tail beyond |z| = 3 is restricted to a
    linear extrapolation between the 2SD and 3SD bounds, which keeps
    extreme weights from producing unstable z values.
    """
    if not x > 0:
        raise DomainError(f"measurement value must be > 0, got {x}")
    z = _raw_z(x, row)
    if not restricted or row.indicator not in WEIGHT_BASED:
        return z
    if z > 3:
        sd3 = inverse_zscore(3.0, row)
        sd2 = inverse_zscore(2.0, row)
        return 3.0 + (x - sd3) / (sd3 - sd2)
    if z < -3:
        sd3n = inverse_zscore(-3.0, row)
        sd2n = inverse_zscore(-2.0, row)
        return -3.0 + (x - sd3n) / (sd2n - sd3n)
    return z


# below this the L != 0 branch underflows; the branches agree to < 1e-10
_L_LOG_BRANCH = 1e-13


def _raw_z(x: float, row: GrowthReferenceRow) -> float:
    # expm1/log1p forms stay accurate as L -> 0 and agree with the L = 0
    # branch in the limit; the naive power form loses all precision there.
    if abs(row.L) > _L_LOG_BRANCH:
        return math.expm1(row.L * math.log(x / row.M)) / (row.L * row.S)
    return math.log(x / row.M) / row.S


def inverse_zscore(z: float, row: GrowthReferenceRow) -> float:
    """Measurement value at unrestricted z-score ``z`` for an LMS row."""
    if abs(row.L) > _L_LOG_BRANCH:
        base = 1.0 + row.L * row.S * z
        if not base > 0:
            raise DomainError(
                f"z={z} outside the LMS branch for L={row.L}, S={row.S}")
        return row.M * math.exp(math.log1p(row.L * row.S * z) / row.L)
    return row.M * math.exp(row.S * z)


class GrowthReference:
    """An immutable, interpolating set of reference knots.

    Safe for unrestricted concurrent reads once constructed.
    """

    def __init__(self, rows):
        grouped: dict[tuple[Indicator, Sex], list[GrowthReferenceRow]] = {}
        for row in rows:
            grouped.setdefault((row.indicator, row.sex), []).append(row)
        self._tables = {}
        for (ind, sex), group in grouped.items():
            group.sort(key=lambda r: r.key)
            keys = np.array([r.key for r in group], dtype=float)
            if len(keys) > 1 and np.any(np.diff(keys) <= 0):
                raise DomainError(
                    f"duplicate or unordered keys in reference for {ind.value}/{sex.value}")
            self._tables[(ind, sex)] = (
                keys,
                np.array([r.L for r in group]),
                np.array([r.M for r in group]),
                np.array([r.S for r in group]),
            )

    @classmethod
    def from_csv(cls, path) -> "GrowthReference":
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header.replace(" ", "") != "indicator,sex,key,L,M,S":
                raise ParseError("expected header 'indicator,sex,key,L,M,S'",
                                 path=str(path), line=1, column=1)
            for lineno, raw in enumerate(fh, start=2):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                if len(parts) != 6:
                    raise ParseError(f"expected 6 fields, got {len(parts)}",
                                     path=str(path), line=lineno, column=1)
                try:
                    rows.append(GrowthReferenceRow(
                        indicator=Indicator(parts[0].strip()),
                        sex=Sex(parts[1].strip()),
                        key=float(parts[2]),
                        L=float(parts[3]),
                        M=float(parts[4]),
                        S=float(parts[5]),
                    ))
                except (ValueError, DomainError) as exc:
                    raise ParseError(str(exc), path=str(path),
                                     line=lineno, column=1) from exc
        if not rows:
            raise ParseError("reference table has no rows", path=str(path), line=2)
        return cls(rows)

    def indicators(self):
        return sorted({ind for ind, _ in self._tables}, key=lambda i: i.value)

    def key_range(self, indicator: Indicator, sex: Sex) -> tuple[float, float]:
        keys = self._table(indicator, sex)[0]
        return float(keys[0]), float(keys[-1])

    def _table(self, indicator: Indicator, sex: Sex):
        try:
            return self._tables[(indicator, sex)]
        except KeyError:
            raise ReferenceGapError(
                f"no reference table for {indicator.value}/{sex.value}") from None

    def lookup(self, indicator: Indicator, sex: Sex, key: float) -> GrowthReferenceRow:
        """Interpolated row at ``key``; exact knots are returned verbatim."""
        keys, L, M, S = self._table(indicator, sex)
        if key < keys[0] or key > keys[-1]:
            raise ReferenceGapError(
                f"key {key} outside reference range "
                f"[{keys[0]}, {keys[-1]}] for {indicator.value}/{sex.value}")
        idx = int(np.searchsorted(keys, key))
        if idx < len(keys) and keys[idx] == key:
            return GrowthReferenceRow(indicator, sex, float(key),
                                      float(L[idx]), float(M[idx]), float(S[idx]))
        lo, hi = idx - 1, idx
        t = (key - keys[lo]) / (keys[hi] - keys[lo])
        return GrowthReferenceRow(
            indicator, sex, float(key),
            float(L[lo] + t * (L[hi] - L[lo])),
            float(M[lo] + t * (M[hi] - M[lo])),
            float(S[lo] + t * (S[hi] - S[lo])),
        )

    def zscore(self, indicator: Indicator, sex: Sex, key: float, x: float,
               restricted: bool = True) -> float:
        return lms_zscore(x, self.lookup(indicator, sex, key), restricted=restricted)
