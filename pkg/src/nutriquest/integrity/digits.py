"""Terminal-digit preference test.

Honest continuous measurements rounded to the recording precision leave
the terminal digit close to uniform; invented values cluster on favorite
digits. Chi-square goodness of fit against uniform over the 10 digits,
df = 9.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_CHI2_THRESHOLD = 16.92   # chi-square 0.95 quantile at df = 9
DEFAULT_MIN_N = 20


@dataclass(frozen=True)
class DigitResult:
    n: int
    counts: tuple                  # occurrences of digits 0..9
    chi2: float | None
    threshold: float
    flag: bool
    indeterminate: bool            # too few values for a verdict


def terminal_digit(value: float, decimal_place: int = 1) -> int:
    """Digit at the given decimal place (1 = tenths, 0 = units)."""
    return int(round(value * 10 ** decimal_place)) % 10


def digit_preference(values, decimal_place: int = 1,
                     min_n: int = DEFAULT_MIN_N,
                     threshold: float = DEFAULT_CHI2_THRESHOLD) -> DigitResult:
    """Chi-square test of terminal-digit uniformity.

    Below ``min_n`` values the result is explicitly indeterminate: no
    statistic, no flag.
    """
    values = list(values)
    n = len(values)
    counts = [0] * 10
    for v in values:
        counts[terminal_digit(v, decimal_place)] += 1
    if n < min_n:
        return DigitResult(n=n, counts=tuple(counts), chi2=None,
                           threshold=threshold, flag=False, indeterminate=True)
    expected = n / 10.0
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    return DigitResult(n=n, counts=tuple(counts), chi2=chi2,
                       threshold=threshold, flag=chi2 > threshold,
                       indeterminate=False)
