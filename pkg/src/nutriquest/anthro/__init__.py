"""Growth-reference engine: LMS z-scores and malnutrition classification."""

from importlib import resources

from .classify import (Classification, CutoffTable, MuacBand, Severity,
                       ZScoreResult, classify)
from .engine import EngineSettings, adjusted_height_cm, evaluate_measurement
from .measurement import HeightMode, Measurement
from .reference import (GrowthReference, GrowthReferenceRow, Indicator, Sex,
                        WEIGHT_BASED, inverse_zscore, lms_zscore)


def bundled_reference() -> GrowthReference:
    """The synthetic LMS table shipped with the package (test/demo data)."""
    path = resources.files("nutriquest.anthro").joinpath("data/synthetic_reference.csv")
    with resources.as_file(path) as p:
        return GrowthReference.from_csv(p)


__all__ = [
    "Classification", "CutoffTable", "MuacBand", "Severity", "ZScoreResult",
    "classify", "EngineSettings", "adjusted_height_cm", "evaluate_measurement",
    "HeightMode", "Measurement", "GrowthReference", "GrowthReferenceRow",
    "Indicator", "Sex", "WEIGHT_BASED", "inverse_zscore", "lms_zscore",
    "bundled_reference",
]
