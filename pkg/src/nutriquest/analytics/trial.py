"""Trial statistics: summaries, t-tests, effect sizes, normality checks,
and the evaluation report over (group, phase) score tables.

Input format: delimited text with header ``chw_id,group,phase,score``;
groups are CG/IG, phases baseline/post/delayed. Within-group comparisons
pair scores by chw_id; between-group comparisons use Welch's
unequal-variance t-test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import DomainError, ParseError

GROUPS = ("CG", "IG")
PHASES = ("baseline", "post", "delayed")


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    sd: float
    median: float
    min: float
    max: float


def summarize(values) -> SummaryStats:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise DomainError("summary statistics need n > 1")
    return SummaryStats(n=int(arr.size), mean=float(arr.mean()),
                        sd=float(arr.std(ddof=1)), median=float(np.median(arr)),
                        min=float(arr.min()), max=float(arr.max()))


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p: float
    kind: str                  # "welch" | "paired"
    degenerate: bool = False   # zero-variance input handled explicitly


def welch_t(x, y) -> TTestResult:
    """Welch's unequal-variance t with Welch-Satterthwaite df, two-sided."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or y.size < 2:
        raise DomainError("welch_t needs n >= 2 per group")
    vx, vy = x.var(ddof=1), y.var(ddof=1)
    nx, ny = x.size, y.size
    se2 = vx / nx + vy / ny
    if se2 == 0.0:
        if x.mean() == y.mean():
            return TTestResult(t=0.0, df=float(nx + ny - 2), p=1.0,
                               kind="welch", degenerate=True)
        t = math.inf if x.mean() > y.mean() else -math.inf
        return TTestResult(t=t, df=float(nx + ny - 2), p=0.0,
                           kind="welch", degenerate=True)
    t = (x.mean() - y.mean()) / math.sqrt(se2)
    df = se2 ** 2 / ((vx / nx) ** 2 / (nx - 1) + (vy / ny) ** 2 / (ny - 1))
    p = 2.0 * float(stats.t.sf(abs(t), df))
    return TTestResult(t=float(t), df=float(df), p=p, kind="welch")


def paired_t(x, y) -> TTestResult:
    """Two-sided paired t-test on equal-length samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise DomainError(f"paired samples differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise DomainError("paired_t needs n >= 2 pairs")
    diffs = x - y
    sd = diffs.std(ddof=1)
    n = diffs.size
    if sd == 0.0:
        if diffs.mean() == 0.0:
            return TTestResult(t=0.0, df=float(n - 1), p=1.0,
                               kind="paired", degenerate=True)
        t = math.inf if diffs.mean() > 0 else -math.inf
        return TTestResult(t=t, df=float(n - 1), p=0.0,
                           kind="paired", degenerate=True)
    t = diffs.mean() / (sd / math.sqrt(n))
    p = 2.0 * float(stats.t.sf(abs(t), n - 1))
    return TTestResult(t=float(t), df=float(n - 1), p=p, kind="paired")


def cohens_d(mean1: float, sd1: float, n1: int,
             mean2: float, sd2: float, n2: int) -> float:
    """Pooled-SD standardized mean difference."""
    if n1 < 2 or n2 < 2:
        raise DomainError("cohens_d needs n > 1 per group")
    if sd1 < 0 or sd2 < 0:
        raise DomainError("standard deviations must be >= 0")
    if sd1 == 0 and sd2 == 0:
        raise DomainError("cohens_d undefined when both SDs are zero")
    pooled = math.sqrt(((n1 - 1) * sd1 ** 2 + (n2 - 1) * sd2 ** 2)
                       / (n1 + n2 - 2))
    return (mean1 - mean2) / pooled


@dataclass(frozen=True)
class NormalityResult:
    n: int
    statistic: float | None
    p: float | None
    rejected: bool | None
    indeterminate: bool


def normality_check(sample, alpha: float = 0.05, min_n: int = 20) -> NormalityResult:
    """Omnibus skewness+kurtosis normality test; indeterminate below min_n."""
    arr = np.asarray(sample, dtype=float)
    if arr.size < min_n:
        return NormalityResult(n=int(arr.size), statistic=None, p=None,
                               rejected=None, indeterminate=True)
    stat, p = stats.normaltest(arr)
    return NormalityResult(n=int(arr.size), statistic=float(stat), p=float(p),
                           rejected=bool(p < alpha), indeterminate=False)


# --- trial table ------------------------------------------------------------

@dataclass(frozen=True)
class BetweenGroupResult:
    phase: str
    test: TTestResult
    d: float                   # IG mean minus CG mean, pooled SD


@dataclass(frozen=True)
class WithinGroupResult:
    group: str
    phase_a: str
    phase_b: str
    n_pairs: int
    test: TTestResult


@dataclass(frozen=True)
class TrialStats:
    summaries: dict            # (group, phase) -> SummaryStats
    between: dict              # phase -> BetweenGroupResult
    within: tuple              # WithinGroupResult entries
    normality: dict            # (group, phase) -> NormalityResult


def load_trial_csv(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "chw_id,group,phase,score":
            raise ParseError("expected header 'chw_id,group,phase,score'",
                             path=str(path), line=1, column=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 4:
                raise ParseError(f"expected 4 fields, got {len(parts)}",
                                 path=str(path), line=lineno, column=1)
            chw_id, group, phase, score = parts
            if group not in GROUPS:
                raise ParseError(f"unknown group {group!r}", path=str(path),
                                 line=lineno, column=1)
            if phase not in PHASES:
                raise ParseError(f"unknown phase {phase!r}", path=str(path),
                                 line=lineno, column=1)
            try:
                records.append((chw_id, group, phase, float(score)))
            except ValueError as exc:
                raise ParseError(str(exc), path=str(path), line=lineno,
                                 column=1) from exc
    return records


def analyze_trial(records) -> TrialStats:
    """Full evaluation pipeline over long-format score records."""
    scores: dict = {}
    for chw_id, group, phase, score in records:
        scores.setdefault((group, phase), {})[chw_id] = score

    summaries = {}
    normality = {}
    for key, by_chw in scores.items():
        values = list(by_chw.values())
        summaries[key] = summarize(values)
        normality[key] = normality_check(values)

    between = {}
    for phase in PHASES:
        ig = scores.get(("IG", phase))
        cg = scores.get(("CG", phase))
        if not ig or not cg:
            continue
        s_ig, s_cg = summaries[("IG", phase)], summaries[("CG", phase)]
        between[phase] = BetweenGroupResult(
            phase=phase,
            test=welch_t(list(ig.values()), list(cg.values())),
            d=cohens_d(s_ig.mean, s_ig.sd, s_ig.n, s_cg.mean, s_cg.sd, s_cg.n),
        )

    within = []
    for group in GROUPS:
        for phase_a, phase_b in (("baseline", "post"), ("post", "delayed"),
                                 ("baseline", "delayed")):
            a = scores.get((group, phase_a))
            b = scores.get((group, phase_b))
            if not a or not b:
                continue
            shared = sorted(set(a) & set(b))
            if len(shared) < 2:
                raise DomainError(
                    f"fewer than 2 paired CHWs for {group} {phase_a}/{phase_b}")
            within.append(WithinGroupResult(
                group=group, phase_a=phase_a, phase_b=phase_b,
                n_pairs=len(shared),
                test=paired_t([b[c] for c in shared], [a[c] for c in shared]),
            ))

    return TrialStats(summaries=summaries, between=between,
                      within=tuple(within), normality=normality)


def format_report(trial: TrialStats) -> str:
    """Human-readable report mirroring the evaluation table layout."""
    lines = []
    header = f"{'Test phase':<12}"
    for group in GROUPS:
        header += f" | {group + ' mean (SD)':>20} {'median (min-max)':>22}"
    lines.append(header)
    lines.append("-" * len(header))
    for phase in PHASES:
        row = f"{phase:<12}"
        for group in GROUPS:
            s = trial.summaries.get((group, phase))
            if s is None:
                row += f" | {'-':>20} {'-':>22}"
            else:
                row += (f" | {s.mean:>12.6g} ({s.sd:.6g})"
                        f" {s.median:>10.6g} ({s.min:.6g}-{s.max:.6g})")
        lines.append(row)
    lines.append("")
    lines.append("Between-group (IG vs CG, Welch two-sided):")
    for phase, res in trial.between.items():
        lines.append(f"  {phase:<10} t = {res.test.t:.6g}, df = {res.test.df:.6g}, "
                     f"p = {res.test.p:.6g}, Cohen's d = {res.d:.6g}")
    lines.append("Within-group (paired two-sided):")
    for res in trial.within:
        lines.append(f"  {res.group} {res.phase_a}->{res.phase_b}: "
                     f"t = {res.test.t:.6g}, df = {res.test.df:.6g}, "
                     f"p = {res.test.p:.6g} (n = {res.n_pairs})")
    return "\n".join(lines) + "\n"


def report_csv(trial: TrialStats) -> str:
    """Machine-readable counterpart of the report."""
    lines = ["section,group,phase,phase_b,n,mean,sd,median,min,max,t,df,p,d"]
    for (group, phase), s in sorted(trial.summaries.items()):
        lines.append(f"summary,{group},{phase},,{s.n},{s.mean:.6g},{s.sd:.6g},"
                     f"{s.median:.6g},{s.min:.6g},{s.max:.6g},,,,")
    for phase, res in sorted(trial.between.items()):
        lines.append(f"between,IGvsCG,{phase},,,,,,,,{res.test.t:.6g},"
                     f"{res.test.df:.6g},{res.test.p:.6g},{res.d:.6g}")
    for res in trial.within:
        lines.append(f"within,{res.group},{res.phase_a},{res.phase_b},"
                     f"{res.n_pairs},,,,,,{res.test.t:.6g},{res.test.df:.6g},"
                     f"{res.test.p:.6g},")
    return "\n".join(lines) + "\n"
