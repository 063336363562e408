"""Estimators and test statistics for the Monte Carlo experiments.

All estimators are pure functions of their sample arrays (permutation
invariant) and report Monte Carlo standard errors, so experiment acceptance
bands can be stated as multiples of the SE.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats


def _jackknife_se(values: np.ndarray) -> float:
    """Standard error from delete-one estimates."""
    n = len(values)
    center = values.mean()
    return float(np.sqrt((n - 1) / n * np.sum((values - center) ** 2)))


@dataclass
class MomentSummary:
    """First four standardized moments of a replicate ensemble with
    delete-one jackknife standard errors."""

    count: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    mean_se: float
    variance_se: float
    skewness_se: float
    excess_kurtosis_se: float

    @classmethod
    def from_samples(cls, samples) -> "MomentSummary":
        x = np.asarray(samples, dtype=float)
        n = len(x)
        if n < 2:
            raise ValueError(f"need at least 2 samples, got {n}")
        mean = float(x.mean())
        dx = x - mean
        m2 = float(np.mean(dx**2))
        m3 = float(np.mean(dx**3))
        m4 = float(np.mean(dx**4))
        variance = m2 * n / (n - 1)
        if m2 > 0:
            skewness = m3 / m2**1.5
            kurtosis = m4 / m2**2 - 3.0
        else:
            skewness = float("nan")
            kurtosis = float("nan")

        # delete-one moments from power sums, vectorized
        s1, s2, s3, s4 = (float(np.sum(x**k)) for k in (1, 2, 3, 4))
        m = n - 1
        mu = (s1 - x) / m
        c2 = (s2 - x**2) / m - mu**2
        c3 = (s3 - x**3) / m - 3.0 * mu * (s2 - x**2) / m + 2.0 * mu**3
        c4 = (
            (s4 - x**4) / m
            - 4.0 * mu * (s3 - x**3) / m
            + 6.0 * mu**2 * (s2 - x**2) / m
            - 3.0 * mu**4
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            var_i = c2 * m / (m - 1)
            skew_i = c3 / c2**1.5
            kurt_i = c4 / c2**2 - 3.0
        mean_se = float(np.sqrt(variance / n))
        return cls(
            count=n,
            mean=mean,
            variance=variance,
            skewness=skewness,
            excess_kurtosis=kurtosis,
            mean_se=mean_se,
            variance_se=_jackknife_se(var_i),
            skewness_se=_jackknife_se(skew_i) if m2 > 0 else float("nan"),
            excess_kurtosis_se=_jackknife_se(kurt_i) if m2 > 0 else float("nan"),
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "count": self.count,
                "mean": self.mean,
                "variance": self.variance,
                "skewness": self.skewness,
                "excess_kurtosis": self.excess_kurtosis,
                "mean_se": self.mean_se,
                "variance_se": self.variance_se,
                "skewness_se": self.skewness_se,
                "excess_kurtosis_se": self.excess_kurtosis_se,
            }
        )


def cross_covariance(samples_a, samples_b) -> tuple[float, float]:
    """Unbiased sample covariance of paired replicates with jackknife SE."""
    a = np.asarray(samples_a, dtype=float)
    b = np.asarray(samples_b, dtype=float)
    if len(a) != len(b):
        raise ValueError(
            f"paired samples must have equal length, got {len(a)} and {len(b)}"
        )
    n = len(a)
    if n < 3:
        raise ValueError(f"need at least 3 pairs for a jackknife SE, got {n}")
    da = a - a.mean()
    db = b - b.mean()
    s_ab = float(np.sum(da * db))
    cov = s_ab / (n - 1)
    # delete-one cross sums in closed form
    s_i = s_ab - n * da * db / (n - 1)
    cov_i = s_i / (n - 2)
    return cov, _jackknife_se(cov_i)


def normality_statistic(samples) -> tuple[float, float, float]:
    """Standardized skewness and excess-kurtosis z-scores and their omnibus
    sum of squares (chi-squared with 2 degrees of freedom under normality)."""
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n < 100:
        raise ValueError(f"need at least 100 samples, got {n}")
    dx = x - x.mean()
    m2 = float(np.mean(dx**2))
    if m2 <= 0:
        raise ValueError("samples are constant; normality is undefined")
    skew = float(np.mean(dx**3)) / m2**1.5
    kurt = float(np.mean(dx**4)) / m2**2 - 3.0
    skew_z = skew / math.sqrt(6.0 / n)
    kurt_z = kurt / math.sqrt(24.0 / n)
    return skew_z, kurt_z, skew_z**2 + kurt_z**2


def omnibus_threshold(level: float = 0.999) -> float:
    """Quantile of the chi-squared(2) reference for the omnibus statistic."""
    return float(sp_stats.chi2.ppf(level, 2))


def hill_tail_index(samples, k: int | None = None) -> tuple[float, float]:
    """Hill estimator of the tail index on the k largest order statistics.

    alpha_hat = k / sum(log(X_(i) / X_(k+1))), SE = alpha_hat / sqrt(k).
    Returns (inf, inf) when the top order statistics are all equal (no tail
    information); callers must treat that as a flag, not an estimate.
    """
    x = np.asarray(samples, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Hill estimation needs strictly positive samples")
    n = len(x)
    if k is None:
        k = math.ceil(math.sqrt(n))
    if not 10 <= k < n / 2:
        raise ValueError(f"need 10 <= k < count/2, got k={k}, count={n}")
    top = np.sort(x)[-(k + 1) :]
    denom = float(np.sum(np.log(top[1:] / top[0])))
    if denom == 0.0:
        return float("inf"), float("inf")
    alpha = k / denom
    return alpha, alpha / math.sqrt(k)


def ks_distance(samples_a, samples_b) -> float:
    """Two-sample Kolmogorov-Smirnov sup-distance of the empirical CDFs."""
    a = np.asarray(samples_a, dtype=float)
    b = np.asarray(samples_b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be nonempty")
    return float(sp_stats.ks_2samp(a, b, method="asymp").statistic)
