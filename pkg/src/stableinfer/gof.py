"""Kolmogorov-Smirnov statistics and asymptotic critical values.

Small, dependency-free helpers used throughout the test-suite and the
demo experiments to compare samples against analytic distribution
functions and against each other.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ks_statistic",
    "ks_two_sample_statistic",
    "ks_critical_value",
    "ks_two_sample_critical_value",
]


def ks_statistic(sample: np.ndarray, cdf) -> float:
    """One-sample KS distance sup_x |F_n(x) - F(x)| against a callable cdf."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    grid = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(grid - f, f - (grid - 1.0 / n))))


def ks_two_sample_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample KS distance between empirical distribution functions."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def _kolmogorov_factor(level: float) -> float:
    # asymptotic inverse of the Kolmogorov distribution: at the 1% level
    # this is the familiar 1.63
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    return math.sqrt(-0.5 * math.log(level / 2.0))


def ks_critical_value(n: int, level: float = 0.01) -> float:
    """Asymptotic one-sample critical distance at the given level."""
    return _kolmogorov_factor(level) / math.sqrt(n)


def ks_two_sample_critical_value(n: int, m: int, level: float = 0.01) -> float:
    """Asymptotic two-sample critical distance at the given level."""
    return _kolmogorov_factor(level) * math.sqrt((n + m) / (n * m))
