"""Exact angle distributions and the empirical checks run against them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .anglemap import AngleMap

__all__ = [
    "ThetaDistribution",
    "KsReport",
    "KS_CRITICAL_1PCT",
    "exact_cdf",
    "exact_pdf",
    "ecdf",
    "weighted_ecdf",
    "ks_statistic",
    "weighted_ks_statistic",
    "two_sample_ks",
    "histogram",
    "angles_to_axis",
]

# asymptotic Kolmogorov distribution quantile at the 1% level
KS_CRITICAL_1PCT = 1.628


@dataclass(frozen=True)
class ThetaDistribution:
    """Law of the angle to the axis for a uniform point on a cap of half-angle ``theta0``."""

    n: int
    theta0: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not 0.0 < self.theta0 <= math.pi:
            raise ValueError(f"theta0 must lie in (0, pi], got {self.theta0!r}")

    @property
    def anglemap(self) -> AngleMap:
        return AngleMap(self.n)

    def cdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        t = np.clip(np.atleast_1d(theta), 0.0, self.theta0)
        amap = self.anglemap
        log_num = amap.log_fraction(t)
        log_den = amap.log_fraction(self.theta0)
        out = np.minimum(np.exp(log_num - log_den), 1.0)
        out[np.atleast_1d(theta) >= self.theta0] = 1.0
        return float(out[0]) if theta.ndim == 0 else out

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        t = np.atleast_1d(theta)
        amap = self.anglemap
        inside = (t >= 0.0) & (t <= self.theta0)
        with np.errstate(divide="ignore"):
            log_sin = np.log(np.sin(np.where(inside, t, 0.5 * math.pi)))
        if self.n == 2:
            log_sin = np.zeros_like(log_sin)
        log_p = amap.log_density_constant() - amap.log_fraction(self.theta0) + (self.n - 2) * log_sin
        out = np.where(inside, np.exp(log_p), 0.0)
        return float(out[0]) if theta.ndim == 0 else out


@dataclass(frozen=True)
class KsReport:
    sample_count: int
    statistic: float
    critical_value_1pct: float

    @property
    def passed(self) -> bool:
        """True when the statistic is below the 1% critical value."""
        return self.statistic < self.critical_value_1pct


def exact_cdf(d: ThetaDistribution, theta):
    return d.cdf(theta)


def exact_pdf(d: ThetaDistribution, theta):
    return d.pdf(theta)


def ecdf(samples, theta):
    """Fraction of ``samples`` that are <= ``theta``."""
    s = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    if s.size == 0:
        raise ValueError("ecdf needs at least one sample")
    res = np.searchsorted(s, theta, side="right") / s.size
    return float(res) if np.ndim(res) == 0 else res


def weighted_ecdf(samples, weights, theta):
    """Weighted fraction of ``samples`` that are <= ``theta``."""
    s = np.asarray(samples, dtype=float).reshape(-1)
    w = np.asarray(weights, dtype=float).reshape(-1)
    if s.shape != w.shape:
        raise ValueError("samples and weights must have the same length")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    total = w.sum()
    if not total > 0:
        raise ValueError("weighted_ecdf needs at least one positive weight")
    order = np.argsort(s, kind="stable")
    s, cum = s[order], np.cumsum(w[order])
    idx = np.searchsorted(s, theta, side="right")
    cum = np.concatenate(([0.0], cum))
    res = cum[idx] / total
    return float(res) if np.ndim(res) == 0 else res


def ks_statistic(samples, exact: ThetaDistribution) -> KsReport:
    """One-sample Kolmogorov-Smirnov statistic against ``exact``.

    Unsorted input is sorted internally.
    """
    s = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    n = s.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    f = np.atleast_1d(exact.cdf(s))
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    return KsReport(n, min(max(d, 0.0), 1.0), KS_CRITICAL_1PCT / math.sqrt(n))


def weighted_ks_statistic(samples, weights, exact: ThetaDistribution) -> KsReport:
    """KS distance between the weighted ECDF of ``samples`` and ``exact``.

    Zero-weight samples do not contribute.  The critical value uses the
    Kish effective sample size ``(sum w)^2 / sum w^2``.
    """
    s = np.asarray(samples, dtype=float).reshape(-1)
    w = np.asarray(weights, dtype=float).reshape(-1)
    keep = w > 0
    s, w = s[keep], w[keep]
    if s.size == 0:
        raise ValueError("weighted_ks_statistic needs at least one positive weight")
    order = np.argsort(s, kind="stable")
    s, w = s[order], w[order]
    total = w.sum()
    upper = np.cumsum(w) / total
    lower = np.concatenate(([0.0], upper[:-1]))
    f = np.atleast_1d(exact.cdf(s))
    d = max(float(np.max(upper - f)), float(np.max(f - lower)))
    n_eff = total**2 / float(np.sum(w * w))
    return KsReport(int(s.size), min(max(d, 0.0), 1.0), KS_CRITICAL_1PCT / math.sqrt(n_eff))


def two_sample_ks(a, b) -> KsReport:
    """Two-sample KS statistic with the asymptotic 1% critical value.

    ``sample_count`` reports the effective size ``n m / (n + m)``, rounded down.
    """
    a = np.sort(np.asarray(a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(b, dtype=float).reshape(-1))
    if a.size == 0 or b.size == 0:
        raise ValueError("two_sample_ks needs two non-empty samples")
    pts = np.concatenate((a, b))
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    n_eff = a.size * b.size / (a.size + b.size)
    return KsReport(int(n_eff), d, KS_CRITICAL_1PCT / math.sqrt(n_eff))


def histogram(samples, bins: int, range):
    """Density-normalized histogram.

    Returns ``(left_edges, density)``; the bar areas add up to the fraction
    of samples inside ``range``.
    """
    lo, hi = float(range[0]), float(range[1])
    if bins < 1 or not lo < hi:
        raise ValueError("need bins >= 1 and lo < hi")
    s = np.asarray(samples, dtype=float).reshape(-1)
    counts, edges = np.histogram(s, bins=int(bins), range=(lo, hi))
    width = (hi - lo) / bins
    return edges[:-1], counts / (s.size * width)


def angles_to_axis(directions, axis) -> np.ndarray:
    """Planar angle between each row of ``directions`` and ``axis``."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    d = np.asarray(directions, dtype=float)
    along = d @ axis
    # atan2 of the perpendicular and parallel parts; arccos loses accuracy near 0 and pi
    across = np.linalg.norm(d - np.multiply.outer(along, axis), axis=-1)
    return np.arctan2(across, along)
