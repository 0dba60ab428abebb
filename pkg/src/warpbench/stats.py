"""Classifier-comparison statistics over accuracy tables.

Paired t test, Wilcoxon signed rank (exact by enumeration up to n=20, normal
approximation with tie correction beyond), per-dataset average ranks, the
Nemenyi critical difference, least-squares slope testing and histogram
binning. Degenerate inputs (zero variance, all-zero differences) come back
flagged instead of raising so batch comparisons never abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "AccuracyTable",
    "TestOutcome",
    "RankSummary",
    "OlsResult",
    "ImprovementSummary",
    "paired_t_test",
    "wilcoxon_signed_rank",
    "average_ranks",
    "friedman_statistic",
    "nemenyi_cd",
    "ols_slope_test",
    "histogram",
    "mean_median_improvement",
    "student_t_cdf",
    "regularized_incomplete_beta",
]


# -- distribution helpers -----------------------------------------------------

def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz, rel tol 1e-12)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-12:
            return h
    raise ArithmeticError("incomplete beta continued fraction failed to converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a


def student_t_cdf(t: float, dof: float) -> float:
    """P(T <= t) for Student's t with the given degrees of freedom."""
    if t == 0.0:
        return 0.5
    x = dof / (dof + t * t)
    tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def _t_p_value(t: float, dof: float, alternative: str) -> float:
    if alternative == "two-sided":
        return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t)) if t != 0.0 else 1.0
    if alternative == "greater":
        return 1.0 - student_t_cdf(t, dof)
    if alternative == "less":
        return student_t_cdf(t, dof)
    raise ValueError(f"unknown alternative {alternative!r}")


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _average_rank_transform(values: np.ndarray) -> np.ndarray:
    """Ascending 1-based ranks; tied values share the mean of their ranks."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = mean_rank
        i = j + 1
    return ranks


# -- outcomes -----------------------------------------------------------------

@dataclass(frozen=True)
class TestOutcome:
    """A test statistic with its p value; degenerate marks undefined cases."""

    statistic: float
    p_value: float
    n: int
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p value must be in [0, 1], got {self.p_value}")


class OlsResult(NamedTuple):
    slope: float
    intercept: float
    p_value: float


class ImprovementSummary(NamedTuple):
    mean_diff: float
    median_diff: float
    t_test: TestOutcome
    wilcoxon: TestOutcome


# -- paired tests -------------------------------------------------------------

def paired_t_test(differences: Sequence[float], alternative: str = "two-sided") -> TestOutcome:
    """Student's t test of mean difference zero, n - 1 degrees of freedom.

    A zero-variance sample cannot be tested: the outcome is flagged
    degenerate, with p 0 when the common difference is nonzero (the mean is
    trivially off zero) and p 1 when every difference is exactly zero.
    """
    d = np.asarray(list(differences), dtype=np.float64)
    n = d.shape[0]
    if n < 2:
        raise ValueError("paired t test needs at least 2 differences")
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return TestOutcome(statistic=0.0, p_value=1.0, n=n, degenerate=True)
        statistic = math.inf if mean > 0 else -math.inf
        supported = (
            alternative == "two-sided"
            or (alternative == "greater" and mean > 0)
            or (alternative == "less" and mean < 0)
        )
        return TestOutcome(
            statistic=statistic, p_value=0.0 if supported else 1.0, n=n, degenerate=True
        )
    t = mean / (sd / math.sqrt(n))
    return TestOutcome(statistic=t, p_value=_t_p_value(t, n - 1, alternative), n=n)


_EXACT_ENUMERATION_LIMIT = 20


def _wilcoxon_exact_p(doubled_ranks: list[int], doubled_statistic: int, alternative: str) -> float:
    """Exact tail probability of the signed rank sum over all sign assignments.

    Counts are accumulated over the doubled-rank grid (ties produce half
    ranks) with one pass per rank, so ties are handled exactly.
    """
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for rank in doubled_ranks:
        for value in range(total, rank - 1, -1):
            if counts[value - rank]:
                counts[value] += counts[value - rank]
    if alternative == "two-sided":
        observed_deviation = abs(2 * doubled_statistic - total)
        qualifying = sum(
            c for value, c in enumerate(counts) if abs(2 * value - total) >= observed_deviation
        )
    elif alternative == "greater":
        qualifying = sum(c for value, c in enumerate(counts) if value >= doubled_statistic)
    elif alternative == "less":
        qualifying = sum(c for value, c in enumerate(counts) if value <= doubled_statistic)
    else:
        raise ValueError(f"unknown alternative {alternative!r}")
    return qualifying / 2 ** len(doubled_ranks)


def wilcoxon_signed_rank(
    differences: Sequence[float], alternative: str = "two-sided"
) -> TestOutcome:
    """Wilcoxon signed rank test of median difference zero.

    Zero differences are dropped before ranking; tied magnitudes share mean
    ranks. The statistic is the positive-rank sum. Up to 20 nonzero
    differences the p value is exact over all sign assignments; beyond that
    the normal approximation with tie correction is used.
    """
    d = [float(x) for x in differences if float(x) != 0.0]
    if not d:
        return TestOutcome(statistic=0.0, p_value=1.0, n=0, degenerate=True)
    magnitudes = np.abs(np.asarray(d))
    ranks = _average_rank_transform(magnitudes)
    w_plus = float(sum(r for r, x in zip(ranks, d) if x > 0))
    n = len(d)
    if n <= _EXACT_ENUMERATION_LIMIT:
        doubled = [int(round(2 * r)) for r in ranks]
        p = _wilcoxon_exact_p(doubled, int(round(2 * w_plus)), alternative)
        return TestOutcome(statistic=w_plus, p_value=p, n=n)
    mean = n * (n + 1) / 4.0
    tie_term = 0.0
    _, tie_counts = np.unique(magnitudes, return_counts=True)
    for t in tie_counts:
        tie_term += t**3 - t
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    z = (w_plus - mean) / math.sqrt(variance)
    if alternative == "two-sided":
        p = math.erfc(abs(z) / math.sqrt(2.0))
    elif alternative == "greater":
        p = _normal_sf(z)
    elif alternative == "less":
        p = 1.0 - _normal_sf(z)
    else:
        raise ValueError(f"unknown alternative {alternative!r}")
    return TestOutcome(statistic=w_plus, p_value=min(p, 1.0), n=n)


# -- accuracy tables and ranks ------------------------------------------------

@dataclass(frozen=True)
class AccuracyTable:
    """Datasets x classifiers grid of test accuracies."""

    datasets: tuple[str, ...]
    classifiers: tuple[str, ...]
    accuracies: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.accuracies, dtype=np.float64)
        if arr.shape != (len(self.datasets), len(self.classifiers)):
            raise ValueError(
                f"accuracy grid shape {arr.shape} does not match "
                f"{len(self.datasets)} datasets x {len(self.classifiers)} classifiers"
            )
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("accuracies must lie in [0, 1]")
        if len(set(self.datasets)) != len(self.datasets):
            raise ValueError("duplicate dataset names")
        if len(set(self.classifiers)) != len(self.classifiers):
            raise ValueError("duplicate classifier names")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "accuracies", arr)

    def column(self, classifier: str) -> np.ndarray:
        try:
            idx = self.classifiers.index(classifier)
        except ValueError:
            raise KeyError(f"unknown classifier {classifier!r}") from None
        return self.accuracies[:, idx]

    @classmethod
    def from_csv_text(cls, text: str) -> "AccuracyTable":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("accuracy CSV is empty")
        header = lines[0].split(",")
        if header[0] != "dataset" or len(header) < 2:
            raise ValueError("accuracy CSV header must be 'dataset,<classifier ids...>'")
        classifiers = tuple(header[1:])
        datasets = []
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            fields = line.split(",")
            if len(fields) != len(header):
                raise ValueError(
                    f"line {lineno}: expected {len(header)} fields, got {len(fields)}"
                )
            datasets.append(fields[0])
            try:
                rows.append([float(v) for v in fields[1:]])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls(tuple(datasets), classifiers, np.asarray(rows))

    @classmethod
    def from_csv(cls, path) -> "AccuracyTable":
        return cls.from_csv_text(Path(path).read_text())

    def to_csv_text(self) -> str:
        for name in (*self.datasets, *self.classifiers):
            if "," in name or "\n" in name:
                raise ValueError(f"identifier {name!r} cannot contain commas or newlines")
        lines = ["dataset," + ",".join(self.classifiers)]
        for name, row in zip(self.datasets, self.accuracies):
            lines.append(name + "," + ",".join(f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text())


@dataclass(frozen=True)
class RankSummary:
    """Average rank per classifier, optionally with a critical difference."""

    classifiers: tuple[str, ...]
    average_ranks: tuple[float, ...]
    critical_difference: float | None = None

    def with_critical_difference(self, cd: float) -> "RankSummary":
        return replace(self, critical_difference=cd)


def average_ranks(table: AccuracyTable) -> RankSummary:
    """Mean over datasets of each classifier's per-dataset accuracy rank.

    Rank 1 is the most accurate classifier; ties share the mean of the tied
    ranks, so ranks depend only on the within-row ordering.
    """
    if len(table.classifiers) < 2:
        raise ValueError("ranking needs at least 2 classifiers")
    ranks = np.vstack([_average_rank_transform(-row) for row in table.accuracies])
    return RankSummary(
        classifiers=table.classifiers,
        average_ranks=tuple(float(v) for v in ranks.mean(axis=0)),
    )


def friedman_statistic(table: AccuracyTable) -> float:
    """Friedman chi-square statistic over the rank table (raw value only)."""
    summary = average_ranks(table)
    n = len(table.datasets)
    k = len(table.classifiers)
    squares = sum(r * r for r in summary.average_ranks)
    return 12.0 * n / (k * (k + 1)) * (squares - k * (k + 1) ** 2 / 4.0)


# Critical values q_alpha for the Nemenyi test, k = 2..20: two-tailed
# studentized range quantiles at infinite degrees of freedom divided by
# sqrt(2).
_NEMENYI_Q = {
    0.05: (
        1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320,
        3.030879, 3.101730, 3.163684, 3.218654, 3.268004, 3.312739,
        3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073,
        3.543799,
    ),
    0.10: (
        1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732,
        2.779884, 2.854606, 2.919889, 2.977768, 3.029694, 3.076733,
        3.119693, 3.159199, 3.195743, 3.229723, 3.261461, 3.291224,
        3.319233,
    ),
}


def nemenyi_cd(num_classifiers: int, num_datasets: int, alpha: float = 0.05) -> float:
    """Minimum average-rank gap for two classifiers to differ significantly."""
    if alpha not in _NEMENYI_Q:
        raise ValueError(f"alpha {alpha} not tabulated (use: {sorted(_NEMENYI_Q)})")
    if not 2 <= num_classifiers <= 20:
        raise ValueError(f"classifier count {num_classifiers} not tabulated (2..20)")
    if num_datasets < 1:
        raise ValueError("need at least one dataset")
    q = _NEMENYI_Q[alpha][num_classifiers - 2]
    return q * math.sqrt(num_classifiers * (num_classifiers + 1) / (6.0 * num_datasets))


# -- regression and binning ---------------------------------------------------

def ols_slope_test(x: Sequence[float], y: Sequence[float]) -> OlsResult:
    """Least-squares line of y on x and the two-sided p for slope zero.

    A perfect fit has no residual variance: p is reported as 0 for a nonzero
    slope and 1 for a flat line.
    """
    xv = np.asarray(list(x), dtype=np.float64)
    yv = np.asarray(list(y), dtype=np.float64)
    if xv.shape != yv.shape:
        raise ValueError("x and y must have equal length")
    n = xv.shape[0]
    if n < 3:
        raise ValueError("slope test needs at least 3 points")
    x_centered = xv - xv.mean()
    sxx = float(np.dot(x_centered, x_centered))
    if sxx == 0.0:
        raise ValueError("x is constant: slope is undefined")
    slope = float(np.dot(x_centered, yv) / sxx)
    intercept = float(yv.mean() - slope * xv.mean())
    residuals = yv - (intercept + slope * xv)
    sse = float(np.dot(residuals, residuals))
    se = math.sqrt(sse / (n - 2) / sxx)
    if se == 0.0:
        return OlsResult(slope, intercept, 1.0 if slope == 0.0 else 0.0)
    t = slope / se
    return OlsResult(slope, intercept, _t_p_value(t, n - 2, "two-sided"))


def histogram(
    values: Iterable[float], bin_width: float, origin: float = 0.0
) -> list[tuple[float, int]]:
    """Counts per half-open bin [edge, edge + width), contiguous across the data."""
    data = [float(v) for v in values]
    if not data:
        raise ValueError("cannot bin an empty sequence")
    if bin_width <= 0.0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    indices = [math.floor((v - origin) / bin_width) for v in data]
    lo, hi = min(indices), max(indices)
    counts = [0] * (hi - lo + 1)
    for idx in indices:
        counts[idx - lo] += 1
    return [(origin + (lo + i) * bin_width, c) for i, c in enumerate(counts)]


def mean_median_improvement(
    before: Sequence[float], after: Sequence[float]
) -> ImprovementSummary:
    """Summary of paired accuracy differences (after minus before)."""
    b = np.asarray(list(before), dtype=np.float64)
    a = np.asarray(list(after), dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("paired columns must have equal length")
    diffs = a - b
    return ImprovementSummary(
        mean_diff=float(diffs.mean()),
        median_diff=float(np.median(diffs)),
        t_test=paired_t_test(diffs),
        wilcoxon=wilcoxon_signed_rank(diffs),
    )
