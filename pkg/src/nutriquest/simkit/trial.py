"""Synthetic trial scores: per-CHW baseline/post/delayed for both arms.

Marginals follow the configured per-(group, phase) means and SDs; the
within-CHW correlation across phases is equicorrelated at trial_rho
(reported results give only marginals, so the correlation is a declared
invention needed by the paired tests).
"""

from __future__ import annotations

import math

import numpy as np

from ..analytics.trial import GROUPS, PHASES
from .config import SimConfig


def simulate_trial(cfg: SimConfig) -> list:
    """Long-format records (chw_id, group, phase, score)."""
    rng = np.random.default_rng(cfg.seed + 2)
    rho = cfg.trial_rho
    records = []
    for group in GROUPS:
        for i in range(cfg.trial_n_per_arm):
            chw_id = f"{group.lower()}{i + 1:03d}"
            shared = float(rng.standard_normal())
            for phase in PHASES:
                mean, sd = cfg.trial_params[(group, phase)]
                eps = float(rng.standard_normal())
                z = math.sqrt(rho) * shared + math.sqrt(1.0 - rho) * eps
                records.append((chw_id, group, phase, mean + sd * z))
    return records


def trial_to_csv(records) -> str:
    lines = ["chw_id,group,phase,score"]
    lines += [f"{c},{g},{p},{s:.6f}" for c, g, p, s in records]
    return "\n".join(lines) + "\n"


def expected_se(cfg: SimConfig, group: str, phase: str) -> float:
    """Standard error of the generated group mean (for recovery checks)."""
    _, sd = cfg.trial_params[(group, phase)]
    return sd / np.sqrt(cfg.trial_n_per_arm)
