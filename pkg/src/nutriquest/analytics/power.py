"""Two-sample t-test power and sample size via the noncentral t.

Power for group size n (allocation ratio r, n2 = ceil(r*n)):
df = n1 + n2 - 2, noncentrality delta = d * sqrt(n1*n2/(n1+n2)); the
one-tailed power is P(T' > t_crit), two-tailed adds the opposite tail.
Sample size is the smallest n whose exact power reaches the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats

from ..errors import DomainError, SearchOverflowError

MAX_N = 10 ** 6


@dataclass(frozen=True)
class PowerParams:
    d: float                  # effect size (standardized mean difference)
    alpha: float = 0.05
    power: float = 0.95
    tails: str = "one"        # "one" | "two"
    allocation_ratio: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0 < self.power < 1:
            raise DomainError(f"power must be in (0, 1), got {self.power}")
        if not self.d > 0:
            raise DomainError(f"effect size must be > 0, got {self.d}")
        if self.tails not in ("one", "two"):
            raise DomainError(f"tails must be 'one' or 'two', got {self.tails!r}")
        if not self.allocation_ratio > 0:
            raise DomainError("allocation ratio must be > 0")


def two_sample_power(d: float, n1: int, n2: int, alpha: float,
                     tails: str = "one") -> float:
    """Exact power of the two-sample pooled t-test."""
    if n1 < 2 or n2 < 2:
        return 0.0
    df = n1 + n2 - 2
    nc = d * math.sqrt(n1 * n2 / (n1 + n2))
    if tails == "two":
        crit = stats.t.ppf(1 - alpha / 2, df)
        return float(stats.nct.sf(crit, df, nc) + stats.nct.cdf(-crit, df, nc))
    crit = stats.t.ppf(1 - alpha, df)
    return float(stats.nct.sf(crit, df, nc))


def power_at(params: PowerParams, n: int) -> float:
    n2 = math.ceil(params.allocation_ratio * n)
    return two_sample_power(params.d, n, n2, params.alpha, params.tails)


def sample_size(params: PowerParams) -> int:
    """Smallest per-group n reaching the requested power."""
    lo, hi = 2, 2
    while power_at(params, hi) < params.power:
        lo = hi
        hi *= 2
        if hi > MAX_N:
            raise SearchOverflowError(
                f"no n <= {MAX_N} reaches power {params.power} for d={params.d}")
    while lo < hi:
        mid = (lo + hi) // 2
        if power_at(params, mid) >= params.power:
            hi = mid
        else:
            lo = mid + 1
    return hi


def normal_approx_sample_size(params: PowerParams) -> int:
    """Classic z-based approximation (cross-check, not the main route)."""
    alpha = params.alpha / 2 if params.tails == "two" else params.alpha
    za = stats.norm.ppf(1 - alpha)
    zb = stats.norm.ppf(params.power)
    return math.ceil(2 * (za + zb) ** 2 / params.d ** 2)
