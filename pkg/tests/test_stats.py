import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conesample import RandomStream
from conesample.sampler import ConeSpec, cap_point
from conesample.stats import (
    KsReport,
    ThetaDistribution,
    angles_to_axis,
    ecdf,
    exact_cdf,
    exact_pdf,
    histogram,
    ks_statistic,
    two_sample_ks,
    weighted_ecdf,
    weighted_ks_statistic,
)

PI = math.pi
scipy_integrate = pytest.importorskip("scipy.integrate")


# exact distribution


@pytest.mark.parametrize(
    "n, theta0, theta, expected",
    [(7, 0.8, 0.8, 1.0), (3, PI / 2, PI / 3, 0.5), (2, PI / 4, PI / 8, 0.5), (5, 0.4, 1.0, 1.0), (5, 0.4, 0.0, 0.0)],
)
def test_cdf_examples(n, theta0, theta, expected):
    assert exact_cdf(ThetaDistribution(n, theta0), theta) == pytest.approx(expected, abs=1e-14)


def test_pdf_examples():
    d = ThetaDistribution(2, PI / 4)
    assert np.allclose(exact_pdf(d, np.linspace(0, PI / 4, 11)), 4 / PI, rtol=1e-13)
    assert exact_pdf(ThetaDistribution(10, 0.5), 0.6) == 0.0


@pytest.mark.parametrize("n", [2, 3, 10, 100])
@pytest.mark.parametrize("theta0", [0.3, PI / 4, 2.0, PI])
def test_pdf_normalized(n, theta0):
    d = ThetaDistribution(n, theta0)
    total, _ = scipy_integrate.quad(d.pdf, 0.0, theta0, epsabs=0.0, epsrel=1e-12, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [2, 3, 10, 100])
def test_cdf_is_integral_of_pdf(n):
    d = ThetaDistribution(n, PI / 4)
    for t in np.linspace(0.05, PI / 4, 8):
        integral, _ = scipy_integrate.quad(d.pdf, 0.0, t, epsabs=0.0, epsrel=1e-12, limit=200)
        assert d.cdf(t) == pytest.approx(integral, abs=1e-8)


def test_pdf_high_dimension_finite():
    d = ThetaDistribution(1000, PI / 4)
    p = d.pdf(np.linspace(0.0, PI / 4, 50))
    assert np.all(np.isfinite(p)) and p[-1] > 0


def test_distribution_validation():
    with pytest.raises(ValueError):
        ThetaDistribution(1, 0.5)
    with pytest.raises(ValueError):
        ThetaDistribution(5, 0.0)


# ECDFs


def test_ecdf_examples():
    assert ecdf([0.4], 0.4) == 1.0
    assert ecdf([0.3, 0.5], 0.1) == 0.0
    assert ecdf([0.1, 0.3], 0.2) == 0.5
    with pytest.raises(ValueError):
        ecdf([], 0.1)


def test_weighted_ecdf_examples():
    s = np.array([0.5, 0.1, 0.3, 0.9])
    grid = np.linspace(0, 1, 21)
    assert np.allclose(weighted_ecdf(s, np.full(4, 2.5), grid), ecdf(s, grid))
    assert weighted_ecdf([0.1, 0.3], [1.0, 0.0], 0.2) == 1.0
    assert weighted_ecdf([0.1, 0.3], [1.0, 3.0], 0.2) == 0.25
    with pytest.raises(ValueError):
        weighted_ecdf([0.1, 0.3], [0.0, 0.0], 0.2)
    with pytest.raises(ValueError):
        weighted_ecdf([0.1, 0.3], [1.0, -1.0], 0.2)


@settings(max_examples=100, deadline=None)
@given(
    s=st.lists(st.floats(0, 3), min_size=1, max_size=40),
    w=st.lists(st.floats(0, 10), min_size=40, max_size=40),
)
def test_property_ecdfs_monotone(s, w):
    s = np.array(s)
    w = np.array(w[: s.size])
    grid = np.linspace(-0.5, 3.5, 101)
    f = ecdf(s, grid)
    assert np.all(np.diff(f) >= 0) and f.min() >= 0 and f.max() <= 1
    if w.sum() > 0:
        g = weighted_ecdf(s, w, grid)
        assert np.all(np.diff(g) >= -1e-15) and g.min() >= 0 and g.max() <= 1 + 1e-15


# KS


def test_ks_quantile_samples():
    d = ThetaDistribution(2, 1.0)
    n = 50
    s = (np.arange(1, n + 1) - 0.5) / n
    assert ks_statistic(s, d).statistic == pytest.approx(1 / (2 * n), abs=1e-14)


def test_ks_two_samples_enumeration():
    d = ThetaDistribution(2, 1.0)
    # F is the identity on [0, 1]
    assert ks_statistic([0.5, 0.25], d).statistic == pytest.approx(0.5, abs=1e-15)


def test_ks_report_fields():
    rep = ks_statistic([0.1, 0.2, 0.7, 0.9], ThetaDistribution(2, 1.0))
    assert isinstance(rep, KsReport)
    assert rep.sample_count == 4
    assert rep.critical_value_1pct == pytest.approx(1.628 / 2)
    assert 0 <= rep.statistic <= 1


def _brute_force_ks(samples, d):
    """sup |F_N - F| over a 10^5-point grid plus both one-sided limits at every sample."""
    s = np.sort(samples)
    grid = np.concatenate([np.linspace(0.0, d.theta0, 10**5), s])
    f = d.cdf(grid)
    right = np.searchsorted(s, grid, side="right") / s.size
    left = np.searchsorted(s, grid, side="left") / s.size
    return float(max(np.max(np.abs(right - f)), np.max(np.abs(left - f))))


@pytest.mark.parametrize("n_samples", [1, 2, 7, 30, 100])
@pytest.mark.parametrize("dim", [3, 10])
def test_ks_matches_brute_force(n_samples, dim):
    d = ThetaDistribution(dim, PI / 4)
    x = cap_point(ConeSpec(np.eye(dim)[0], PI / 4), RandomStream(n_samples), size=n_samples)
    th = angles_to_axis(x, np.eye(dim)[0])
    assert ks_statistic(th, d).statistic == pytest.approx(_brute_force_ks(th, d), abs=1e-12)


def test_ks_sorts_internally():
    d = ThetaDistribution(5, 1.0)
    s = RandomStream(1).uniform(40)
    assert ks_statistic(s, d).statistic == ks_statistic(np.sort(s), d).statistic


def test_ks_cap_samples_pass():
    x = cap_point(ConeSpec(np.eye(10)[-1], PI / 4), RandomStream(3), size=10**4)
    rep = ks_statistic(angles_to_axis(x, np.eye(10)[-1]), ThetaDistribution(10, PI / 4))
    assert rep.statistic < 0.0163
    assert rep.passed


def test_weighted_ks_reduces_to_unweighted():
    d = ThetaDistribution(4, 1.0)
    s = RandomStream(2).uniform(200)
    a = ks_statistic(s, d)
    b = weighted_ks_statistic(s, np.full(200, 0.3), d)
    assert b.statistic == pytest.approx(a.statistic, abs=1e-14)
    assert b.critical_value_1pct == pytest.approx(a.critical_value_1pct)


def test_weighted_ks_ignores_zero_weights():
    d = ThetaDistribution(2, 1.0)
    s = np.array([0.5, 0.25, 0.9])
    rep = weighted_ks_statistic(s, [1.0, 1.0, 0.0], d)
    assert rep.statistic == pytest.approx(ks_statistic([0.5, 0.25], d).statistic)
    assert rep.sample_count == 2


def test_two_sample_ks():
    a = RandomStream(3).uniform(3000)
    b = RandomStream(4).uniform(3000)
    assert two_sample_ks(a, b).passed
    assert not two_sample_ks(a, b + 0.2).passed
    assert two_sample_ks([0.1, 0.2], [0.8, 0.9]).statistic == 1.0


# histogram


def test_histogram_single_bin_mass():
    left, dens = histogram([0.11, 0.12, 0.13], 10, (0.0, 1.0))
    assert left[1] == pytest.approx(0.1)
    assert dens[1] == pytest.approx(10.0)
    assert dens.sum() * 0.1 == pytest.approx(1.0)


def test_histogram_in_range_fraction():
    _, dens = histogram([0.1, 0.2, 5.0, -1.0], 4, (0.0, 1.0))
    assert dens.sum() * 0.25 == pytest.approx(0.5)


def test_histogram_validation():
    with pytest.raises(ValueError):
        histogram([0.1], 0, (0, 1))
    with pytest.raises(ValueError):
        histogram([0.1], 3, (1, 1))


def _poisson_ok(th, d, bins):
    lo, hi = 0.0, d.theta0
    width = (hi - lo) / bins
    left, dens = histogram(th, bins, (lo, hi))
    expected_counts = th.size * np.diff(d.cdf(np.append(left, hi)))
    counts = dens * th.size * width
    return np.all(np.abs(counts - expected_counts) <= 5 * np.sqrt(np.maximum(expected_counts, 1.0)))


def test_histogram_uniform_n2():
    d = ThetaDistribution(2, PI / 4)
    x = cap_point(ConeSpec(np.array([0.0, 1.0]), PI / 4), RandomStream(5), size=10**4)
    th = angles_to_axis(x, np.array([0.0, 1.0]))
    assert _poisson_ok(th, d, 50)


def test_histogram_fig4_setup():
    d = ThetaDistribution(10, PI / 4)
    x = cap_point(ConeSpec(np.eye(10)[-1], PI / 4), RandomStream(6), size=10**4)
    assert _poisson_ok(angles_to_axis(x, np.eye(10)[-1]), d, 100)


# angles


def test_angles_to_axis_accuracy():
    axis = np.array([0.0, 0.0, 1.0])
    eps = 1e-10
    d = np.array([[math.sin(eps), 0.0, math.cos(eps)], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
    assert np.allclose(angles_to_axis(d, axis), [eps, PI / 2, PI], rtol=1e-12, atol=0)
