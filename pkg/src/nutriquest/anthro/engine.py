"""Full per-measurement evaluation: measurement + child -> z-scores.

Handles the stadiometer/infantometer reconciliation: below a configurable
age the references expect recumbent length, above it standing height, and
a measurement taken the other way is shifted by the standard 0.7 cm.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError, ReferenceGapError
from .classify import Classification, CutoffTable, ZScoreResult, classify
from .measurement import HeightMode, Measurement
from .reference import GrowthReference, Indicator, Sex, lms_zscore


@dataclass(frozen=True)
class EngineSettings:
    recumbent_offset_cm: float = 0.7
    standing_age_days: int = 731  # references expect standing height from here


def adjusted_height_cm(height: float, mode: HeightMode, age_days: float | None,
                       settings: EngineSettings) -> float:
    """Height converted to what the reference expects at this age.

    Unknown age keeps the raw value (nothing to reconcile against).
    """
    if age_days is None:
        return height
    expects_standing = age_days >= settings.standing_age_days
    if expects_standing and mode == HeightMode.RECUMBENT:
        return height - settings.recumbent_offset_cm
    if not expects_standing and mode == HeightMode.STANDING:
        return height + settings.recumbent_offset_cm
    return height


def evaluate_measurement(m: Measurement, sex: Sex, age_days: float | None,
                         reference: GrowthReference, cutoffs: CutoffTable,
                         settings: EngineSettings = EngineSettings()) -> ZScoreResult:
    """Compute every z whose inputs are present; record gaps as flags.

    A z value is absent when its measurement input is missing, the child's
    age is unknown (age-keyed indicators), or the key falls outside the
    reference table; the latter is reported via a ``reference_gap:`` flag
    rather than an exception so a batch never dies on one odd record.
    """
    m.validate()
    flags: set[str] = set()
    height = None
    if m.height is not None:
        height = adjusted_height_cm(m.height, m.height_mode, age_days, settings)
        if height != m.height:
            flags.add("height_mode_adjusted")

    def attempt(indicator: Indicator, key: float | None, x: float | None):
        if key is None or x is None:
            return None
        try:
            return lms_zscore(x, reference.lookup(indicator, sex, key))
        except ReferenceGapError:
            flags.add(f"reference_gap:{indicator.value.lower()}")
            return None
        except DomainError:
            flags.add(f"domain:{indicator.value.lower()}")
            return None

    waz = attempt(Indicator.WFA, age_days, m.weight)
    haz = attempt(Indicator.HFA, age_days, height)
    whz = attempt(Indicator.WFH, None if height is None else height * 10.0, m.weight)
    muacz = attempt(Indicator.MUACFA, age_days, m.muac)

    cls = classify(cutoffs, waz=waz, haz=haz, whz=whz, muac_mm=m.muac)
    return ZScoreResult(waz=waz, haz=haz, whz=whz, muacz=muacz,
                        flags=frozenset(flags), classification=cls)
