import math

import numpy as np
import pytest

from conesample import NumericalError, RandomStream
from conesample.baselines import (
    ShiftedNormalSpec,
    ShiftedSphereSpec,
    log_radial_integral,
    normal_direction_log_density,
    shifted_normal_accepted,
    shifted_normal_sample,
    shifted_sphere_log_density,
    shifted_sphere_sample,
)
from conesample.sampler import ConeSpec, cap_point
from conesample.stats import ThetaDistribution, angles_to_axis, ks_statistic, weighted_ks_statistic

PI = math.pi
scipy_integrate = pytest.importorskip("scipy.integrate")


def e_n(n):
    v = np.zeros(n)
    v[-1] = 1.0
    return v


def median_ratio(make_weighted, n, seeds=range(20), count=10**4, theta0=PI / 4):
    """Median baseline KS over median proposed KS at ``count`` samples."""
    d = ThetaDistribution(n, theta0)
    base, prop = [], []
    for s in seeds:
        b_rng, p_rng = RandomStream(s).spawn(2)
        ws = make_weighted(b_rng)
        base.append(weighted_ks_statistic(angles_to_axis(ws.directions, e_n(n)), ws.weights, d).statistic)
        x = cap_point(ConeSpec(e_n(n), theta0), p_rng, size=count)
        prop.append(ks_statistic(angles_to_axis(x, e_n(n)), d).statistic)
    return float(np.median(base) / np.median(prop))


# specs


def test_sphere_spec_validation():
    with pytest.raises(ValueError):
        ShiftedSphereSpec(e_n(3), PI / 2)
    with pytest.raises(ValueError):
        ShiftedSphereSpec(np.zeros(3), 0.5)
    s = ShiftedSphereSpec(2.0 * e_n(4), PI / 6)
    assert s.radius == pytest.approx(1.0)
    assert 0 < s.radius < s.mu_norm


def test_normal_spec_validation():
    with pytest.raises(ValueError):
        ShiftedNormalSpec(e_n(3), 0.0, 0.5)
    with pytest.raises(ValueError):
        ShiftedNormalSpec(e_n(3), 0.1, PI)


# shifted sphere


def test_sphere_density_at_axis():
    n = 7
    spec = ShiftedSphereSpec(e_n(n), PI / 4)
    log_d, clamped = shifted_sphere_log_density(spec, e_n(n))
    r1, r2 = 1 + math.sqrt(0.5), 1 - math.sqrt(0.5)
    assert r1 == pytest.approx(1.7071068, abs=1e-7) and r2 == pytest.approx(0.2928932, abs=1e-7)
    assert log_d[0] == pytest.approx(math.log(r1**n - r2**n), rel=1e-14)
    assert not clamped.any()


def test_sphere_density_matches_direct_formula():
    n = 5
    mu = 1.3 * np.array([0.6, 0.0, 0.0, 0.0, 0.8])
    spec = ShiftedSphereSpec(mu, 0.5)
    x = shifted_sphere_sample(spec, RandomStream(1), 200).directions
    c = x @ mu
    disc = np.maximum(c * c - mu @ mu + spec.radius**2, 0.0)
    r1, r2 = c + np.sqrt(disc), c - np.sqrt(disc)
    log_d, _ = shifted_sphere_log_density(spec, x)
    assert np.allclose(log_d, np.log(r1**n - r2**n), rtol=1e-10)


def test_sphere_density_is_correct_law():
    n = 3
    spec = ShiftedSphereSpec(e_n(n), PI / 4)
    ws = shifted_sphere_sample(spec, RandomStream(2), 10**5)
    # reweighted by 1/density the angles follow the uniform-cap law
    d = ThetaDistribution(n, PI / 4)
    rep = weighted_ks_statistic(angles_to_axis(ws.directions, e_n(n)), ws.weights, d)
    assert rep.passed


@pytest.mark.parametrize("n", [2, 10, 100])
def test_sphere_containment_and_weights(n):
    spec = ShiftedSphereSpec(0.7 * e_n(n), PI / 4)
    ws = shifted_sphere_sample(spec, RandomStream(n), 5000)
    assert np.all(angles_to_axis(ws.directions, e_n(n)) <= PI / 4 + 1e-9)
    assert np.all(np.isfinite(ws.weights)) and np.all(ws.weights >= 0)
    assert ws.weights.max() == 1.0
    assert np.isfinite(ws.log_weight_range) and ws.log_weight_range >= 0
    assert ws.clamped == 0


def test_sphere_n10_converges():
    spec = ShiftedSphereSpec(e_n(10), PI / 4)
    ws = shifted_sphere_sample(spec, RandomStream(3), 10**4)
    rep = weighted_ks_statistic(angles_to_axis(ws.directions, e_n(10)), ws.weights, ThetaDistribution(10, PI / 4))
    assert rep.statistic < 0.1


def test_sphere_n10_slower_than_proposed():
    spec = ShiftedSphereSpec(e_n(10), PI / 4)
    assert median_ratio(lambda r: shifted_sphere_sample(spec, r, 10**4), 10) >= 3.0


# shifted normal


def test_normal_density_closed_form_n2():
    spec = ShiftedNormalSpec(np.array([0.0, 1.0]), 1.0, PI / 2)
    # phi(0) * (phi(1) + Phi(1))
    f = math.exp(normal_direction_log_density(spec, np.array([0.0, 1.0]))[0])
    assert f == pytest.approx(0.43218034423040274221, rel=1e-12)


@pytest.mark.parametrize("n, sigma", [(3, 0.5), (10, 1.0), (100, 0.12)])
def test_normal_density_normalized(n, sigma):
    spec = ShiftedNormalSpec(e_n(n), sigma, PI / 2)
    log_area = math.log(2.0) + 0.5 * (n - 1) * math.log(PI) - math.lgamma(0.5 * (n - 1))

    def integrand(t):
        x = np.zeros(n)
        x[0], x[-1] = math.sin(t), math.cos(t)
        return math.exp(normal_direction_log_density(spec, x)[0] + log_area + (n - 2) * math.log(max(math.sin(t), 1e-300)))

    total, _ = scipy_integrate.quad(integrand, 0.0, PI, epsrel=1e-11, limit=400, points=[0.3, 0.6])
    assert total == pytest.approx(1.0, abs=1e-8)


def _adaptive_simpson(f, a, b, tol, depth=60):
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left, right = simpson(fa, flm, fm, a, m), simpson(fm, frm, fb, m, b)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1)

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def _panelled_simpson(f, a, b, panels, tol):
    """Adaptive Simpson started on equal panels, so narrow peaks are seen at the first level."""
    edges = np.linspace(a, b, panels + 1)
    return sum(_adaptive_simpson(f, lo, hi, tol / panels) for lo, hi in zip(edges[:-1], edges[1:]))


@pytest.mark.parametrize("n", [2, 10, 100])
@pytest.mark.parametrize("sigma", [0.08, 0.12, 1.0])
@pytest.mark.parametrize("c", [0.3, 0.7, 1.0])
def test_radial_integral_matches_adaptive_simpson(n, sigma, c):
    k = n - 1
    r_star = 0.5 * (c + math.sqrt(c * c + 4 * k * sigma * sigma))

    def log_f(r):
        return k * math.log(r) - 0.5 * ((r - c) / sigma) ** 2 - 0.5 * math.log(2 * PI) if r > 0 else -math.inf

    peak = log_f(r_star)
    # the integrand is negligible beyond 40 standard deviations past the mode
    hi = r_star + 40.0 * sigma
    val = _panelled_simpson(lambda r: math.exp(log_f(r) - peak), 0.0, hi, 400, 1e-13 * sigma)
    ref = peak + math.log(val)
    got = float(log_radial_integral(n, np.array([c]), sigma)[0])
    # 1e-8 relative on the integral itself
    assert abs(math.expm1(got - ref)) <= 1e-8


def test_radial_integral_failure_is_reported():
    with pytest.raises(NumericalError):
        log_radial_integral(10, np.array([np.nan]), 0.1)


@pytest.mark.parametrize("sigma, expected", [(0.08, 0.9831), (0.12, 0.0968)])
def test_normal_acceptance_fraction(sigma, expected):
    draws = shifted_normal_sample(ShiftedNormalSpec(e_n(100), sigma, PI / 4), RandomStream(4), 10**5)
    assert draws.acceptance_fraction == pytest.approx(expected, abs=0.01)


def test_normal_weights():
    draws = shifted_normal_sample(ShiftedNormalSpec(e_n(100), 0.12, PI / 4), RandomStream(5), 20000)
    w = draws.samples.weights
    assert np.all(np.isfinite(w)) and np.all(w >= 0)
    assert np.all(w[~draws.accepted] == 0) and np.all(w[draws.accepted] > 0)
    assert np.isfinite(draws.samples.log_weight_range)


def test_normal_accepted_count_and_containment():
    spec = ShiftedNormalSpec(e_n(20), 0.3, 0.6)
    ws, used = shifted_normal_accepted(spec, 3000, RandomStream(6))
    assert len(ws) == 3000 and used >= 3000
    assert np.all(angles_to_axis(ws.directions, e_n(20)) <= 0.6 + 1e-12)


def test_normal_accepted_prefix_matches_single_draws():
    # the first accepted directions are the accepted rows of the same underlying draws
    spec = ShiftedNormalSpec(e_n(10), 0.5, 0.8)
    ws, used = shifted_normal_accepted(spec, 50, RandomStream(7), batch=1000)
    draws = shifted_normal_sample(spec, RandomStream(7), 1000)
    ref = draws.samples.directions[draws.accepted][:50]
    assert np.array_equal(ws.directions, ref)
    assert used == int(np.flatnonzero(draws.accepted)[49]) + 1


def test_normal_weighting_corrects_the_law():
    # sigma = 1 at n = 10 is strongly non-uniform; weighting must still recover the cap law
    spec = ShiftedNormalSpec(e_n(10), 1.0, PI / 4)
    ws, _ = shifted_normal_accepted(spec, 20000, RandomStream(8))
    d = ThetaDistribution(10, PI / 4)
    th = angles_to_axis(ws.directions, e_n(10))
    assert not ks_statistic(th, d).passed
    assert weighted_ks_statistic(th, ws.weights, d).passed


def test_normal_sigma008_slower_than_proposed():
    spec = ShiftedNormalSpec(e_n(100), 0.08, PI / 4)
    assert median_ratio(lambda r: shifted_normal_accepted(spec, 10**4, r)[0], 100, seeds=range(8)) >= 3.0


@pytest.mark.xfail(
    strict=True,
    reason="with an exact density the sigma=0.12 baseline keeps about half its effective "
    "sample size, so its KS is only about 1.4x the proposed method's",
)
def test_normal_sigma012_slower_than_proposed():
    spec = ShiftedNormalSpec(e_n(100), 0.12, PI / 4)
    assert median_ratio(lambda r: shifted_normal_accepted(spec, 10**4, r)[0], 100, seeds=range(8)) >= 3.0
