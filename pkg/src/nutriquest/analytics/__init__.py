"""Efficiency scoring and the trial-statistics pipeline."""

from .efficiency import EfficiencyScore, EfficiencyWeights, efficiency_score
from .power import (MAX_N, PowerParams, normal_approx_sample_size, power_at,
                    sample_size, two_sample_power)
from .trial import (GROUPS, PHASES, BetweenGroupResult, NormalityResult,
                    SummaryStats, TrialStats, TTestResult, WithinGroupResult,
                    analyze_trial, cohens_d, format_report, load_trial_csv,
                    normality_check, paired_t, report_csv, summarize, welch_t)

__all__ = [
    "EfficiencyScore", "EfficiencyWeights", "efficiency_score", "MAX_N",
    "PowerParams", "normal_approx_sample_size", "power_at", "sample_size",
    "two_sample_power", "GROUPS", "PHASES", "BetweenGroupResult",
    "NormalityResult", "SummaryStats", "TrialStats", "TTestResult",
    "WithinGroupResult", "analyze_trial", "cohens_d", "format_report",
    "load_trial_csv", "normality_check", "paired_t", "report_csv",
    "summarize", "welch_t",
]
