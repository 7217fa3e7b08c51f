"""Goodness-of-fit machinery turning Monte Carlo samples into verdicts.

Thresholds are configuration, not constants: every result records the
significance level and the exact threshold used, so CSV summaries are
auditable.  KS thresholds use the asymptotic Kolmogorov quantile (about
1.63/sqrt(N) at the default 1% level).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogi
from scipy.stats import chi2

__all__ = [
    "Ecdf",
    "GofResult",
    "SampleSummary",
    "ks_statistic",
    "chi_square_gof",
    "summarize",
    "randomized_pit",
]


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical cdf over a sorted sample."""

    sorted_samples: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "Ecdf":
        arr = np.sort(np.asarray(samples, dtype=np.float64))
        if arr.size == 0:
            raise ValueError("need at least one sample")
        return cls(arr)

    @property
    def size(self) -> int:
        return self.sorted_samples.size

    def __call__(self, x):
        idx = np.searchsorted(self.sorted_samples, np.asarray(x, dtype=np.float64), side="right")
        out = idx / self.size
        return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class GofResult:
    """One goodness-of-fit verdict; passed <=> statistic <= threshold."""

    kind: str
    statistic: float
    threshold: float
    passed: bool
    sample_size: int
    significance: float

    def as_row(self) -> dict:
        return {
            "kind": self.kind,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "significance": self.significance,
            "pass": self.passed,
            "sample_size": self.sample_size,
        }


@dataclass(frozen=True)
class SampleSummary:
    count: int
    mean: float
    stderr: float
    min: float
    max: float

    def as_row(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "stderr": self.stderr,
            "min": self.min,
            "max": self.max,
        }


def ks_statistic(samples, cdf, significance: float = 0.01) -> GofResult:
    """One-sample Kolmogorov-Smirnov sup-distance against a target cdf.

    D = max_i max(i/N - F(x_i), F(x_i) - (i-1)/N) over the sorted sample;
    the pass threshold is kolmogi(significance)/sqrt(N).
    """
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    n = xs.size
    if n == 0:
        raise ValueError("need at least one sample")
    try:
        fx = np.asarray(cdf(xs), dtype=np.float64)
        if fx.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        fx = np.array([float(cdf(float(x))) for x in xs])
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    stat = float(max(np.max(hi - fx), np.max(fx - lo), 0.0))
    threshold = float(kolmogi(significance)) / np.sqrt(n)
    return GofResult("KS", stat, threshold, stat <= threshold, n, significance)


def chi_square_gof(
    counts,
    pmf,
    significance: float = 0.01,
    min_expected: float = 5.0,
) -> GofResult:
    """Pearson chi-square test of binned counts against a target pmf.

    The pmf must cover the bins exactly (sum 1); bins whose expected count
    falls below ``min_expected`` are pooled into the tail (last) bin, and the
    pool keeps absorbing bins from the end until it is large enough.  A
    single surviving bin is degenerate and raises.
    """
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(pmf, dtype=np.float64)
    if counts.shape != probs.shape or counts.ndim != 1:
        raise ValueError("counts and pmf must be 1-d arrays of equal length")
    if np.any(probs < 0):
        raise ValueError("pmf entries must be nonnegative")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("pmf must sum to 1 over the provided bins")
    n = counts.sum()
    expected = n * probs
    pool = expected < min_expected
    pool[-1] = True
    while True:
        kept = np.flatnonzero(~pool)
        pooled_expected = expected[pool].sum()
        if pooled_expected >= min_expected or kept.size == 0:
            break
        pool[kept[-1]] = True
    obs = np.append(counts[~pool], counts[pool].sum())
    exp = np.append(expected[~pool], expected[pool].sum())
    if exp.size < 2:
        raise ValueError("degenerate test: a single bin remains after pooling")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = exp.size - 1
    threshold = float(chi2.ppf(1.0 - significance, dof))
    return GofResult("ChiSquare", stat, threshold, stat <= threshold, int(n), significance)


def summarize(samples) -> SampleSummary:
    """Count, mean, stderr (sd/sqrt(N)), and extremes of a sample."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("need at least one sample")
    stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return SampleSummary(
        count=int(arr.size),
        mean=float(arr.mean()),
        stderr=stderr,
        min=float(arr.min()),
        max=float(arr.max()),
    )


def randomized_pit(values, support_min: int, pmf, rng: np.random.Generator) -> np.ndarray:
    """Randomized probability integral transform for an integer-valued law.

    With F the cdf of ``pmf`` (supported on support_min, support_min+1, ...),
    returns F(v) - p(v) * V with V ~ U(0,1); exact U(0,1) samples under the
    null, which lets the one-sample KS machinery act on discrete data.
    """
    vals = np.asarray(values, dtype=np.int64) - support_min
    probs = np.asarray(pmf, dtype=np.float64)
    if vals.min() < 0 or vals.max() >= probs.size:
        raise ValueError("value outside pmf support")
    cum = np.cumsum(probs)
    return cum[vals] - probs[vals] * rng.random(vals.size)
