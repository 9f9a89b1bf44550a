"""Falsification and plausibility screening."""

from .alerts import ALERT_KINDS, Alert, Finding, ScreeningResult, SEVERITIES
from .digits import (DEFAULT_CHI2_THRESHOLD, DigitResult, digit_preference,
                     terminal_digit)
from .duplicates import DuplicateGroup, find_duplicates
from .report import RiskReport, RiskRow, chw_risk_report
from .screening import (DEFAULT_Z_LIMITS, ScreeningConfig, distance_m,
                        screen_measurement)

__all__ = [
    "ALERT_KINDS", "Alert", "Finding", "ScreeningResult", "SEVERITIES",
    "DEFAULT_CHI2_THRESHOLD", "DigitResult", "digit_preference",
    "terminal_digit", "DuplicateGroup", "find_duplicates", "RiskReport",
    "RiskRow", "chw_risk_report", "DEFAULT_Z_LIMITS", "ScreeningConfig",
    "distance_m", "screen_measurement",
]
