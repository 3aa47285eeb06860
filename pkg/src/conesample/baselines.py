"""Re-weighting baselines for cap sampling.

Both generators are O(n) per draw but produce non-uniform directions, so
each sample carries an importance weight proportional to the reciprocal
of its density on the sphere.  Weights are left unnormalized: only the
self-normalizing weighted ECDF consumes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._errors import NumericalError
from .rng import RandomStream, as_stream
from .sampler import sphere_point

__all__ = [
    "ShiftedSphereSpec",
    "ShiftedNormalSpec",
    "WeightedSamples",
    "NormalDraws",
    "shifted_sphere_sample",
    "shifted_sphere_log_density",
    "shifted_normal_sample",
    "shifted_normal_accepted",
    "normal_direction_log_density",
    "log_radial_integral",
    "DEFAULT_SIGMAS",
]

# the two spreads compared at n=100 with |mu| = 1 and theta0 = pi/4
DEFAULT_SIGMAS = (0.08, 0.12)

GL_NODES = 200
GL_HALF_WIDTHS = 12.0
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class WeightedSamples:
    """Directions with nonnegative importance weights.

    ``log_weight_range`` is ``max - min`` of the log weights over samples
    with positive weight, a quick read on how degenerate the weighting is.
    ``clamped`` counts draws whose discriminant had to be clamped to zero.
    """

    directions: np.ndarray
    weights: np.ndarray
    log_weight_range: float
    clamped: int = 0

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class NormalDraws:
    """Output of :func:`shifted_normal_sample`: every draw, with rejected ones at weight 0."""

    samples: WeightedSamples
    accepted: np.ndarray

    @property
    def acceptance_fraction(self) -> float:
        return float(np.mean(self.accepted)) if self.accepted.size else float("nan")


@dataclass(frozen=True, eq=False)
class ShiftedSphereSpec:
    """Ball of radius ``|mu| sin(theta0)`` centered at ``mu``; tangent to the cone of half-angle ``theta0``."""

    mu: np.ndarray
    theta0: float

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).reshape(-1)
        if mu.size < 2 or not np.all(np.isfinite(mu)) or not np.linalg.norm(mu) > 0:
            raise ValueError("mu must be a finite nonzero vector with at least 2 coordinates")
        if not 0.0 < self.theta0 < 0.5 * math.pi:
            raise ValueError(f"theta0 must lie in (0, pi/2), got {self.theta0!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "theta0", float(self.theta0))

    @property
    def n(self) -> int:
        return self.mu.size

    @property
    def mu_norm(self) -> float:
        return float(np.linalg.norm(self.mu))

    @property
    def radius(self) -> float:
        return self.mu_norm * math.sin(self.theta0)


@dataclass(frozen=True, eq=False)
class ShiftedNormalSpec:
    """Isotropic normal ``N(mu, sigma^2 I)`` whose directions are kept when within ``theta0`` of ``mu``."""

    mu: np.ndarray
    sigma: float
    theta0: float

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).reshape(-1)
        if mu.size < 2 or not np.all(np.isfinite(mu)) or not np.linalg.norm(mu) > 0:
            raise ValueError("mu must be a finite nonzero vector with at least 2 coordinates")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not 0.0 < self.theta0 < math.pi:
            raise ValueError(f"theta0 must lie in (0, pi), got {self.theta0!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "theta0", float(self.theta0))

    @property
    def n(self) -> int:
        return self.mu.size


def _relative_weights(log_w, mask=None):
    """exp(log_w - max), zero outside ``mask``; also the log-weight spread."""
    if mask is None:
        mask = np.ones(log_w.shape, dtype=bool)
    w = np.zeros(log_w.shape)
    if not np.any(mask):
        return w, 0.0
    lw = log_w[mask]
    top = lw.max()
    w[mask] = np.exp(lw - top)
    return w, float(top - lw.min())


def shifted_sphere_log_density(spec: ShiftedSphereSpec, directions):
    """Unnormalized log density ``log(r1^n - r2^n)`` of the shifted-sphere directions.

    Returns ``(log_density, clamped)`` where ``clamped`` flags rows whose
    discriminant was slightly negative from rounding and was set to zero.
    """
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    n = spec.n
    c = d @ spec.mu
    m2 = spec.mu_norm**2
    r0 = spec.radius
    disc = c * c - m2 + r0 * r0
    clamped = disc < 0.0
    root = np.sqrt(np.maximum(disc, 0.0))
    r1 = c + root
    # r1 * r2 = |mu|^2 - r0^2, which avoids cancellation in c - root
    r2 = (m2 - r0 * r0) / r1
    with np.errstate(divide="ignore"):
        log_dens = n * np.log(r1) + np.log1p(-((r2 / r1) ** n))
    return log_dens, clamped


def shifted_sphere_sample(spec: ShiftedSphereSpec, rng: RandomStream, size: int) -> WeightedSamples:
    """Draw ``size`` directions by normalizing uniform points of the shifted ball."""
    rng = as_stream(rng)
    n = spec.n
    m = int(size)
    s = sphere_point(n, rng, m)
    radius = rng.uniform(m) ** (1.0 / n)
    x = spec.radius * radius[:, None] * s + spec.mu
    d = x / np.linalg.norm(x, axis=1)[:, None]
    log_dens, clamped = shifted_sphere_log_density(spec, d)
    w, spread = _relative_weights(-log_dens, np.isfinite(log_dens))
    return WeightedSamples(d, w, spread, int(clamped.sum()))


def log_radial_integral(n: int, c, sigma: float):
    """log of ``int_0^inf r^(n-1) phi((r - c)/sigma) dr``, vectorized over ``c``.

    200-node Gauss-Legendre over +-12 local widths around the integrand's
    mode, evaluated with the mode's log value factored out.
    """
    c = np.asarray(c, dtype=float)
    k = n - 1
    r_star = 0.5 * (c + np.sqrt(c * c + 4.0 * k * sigma * sigma))
    width = sigma / np.sqrt(1.0 + k * sigma * sigma / (r_star * r_star))
    lo = np.maximum(0.0, r_star - GL_HALF_WIDTHS * width)
    hi = r_star + GL_HALF_WIDTHS * width
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    r = mid[..., None] + half[..., None] * _GL_X

    def log_f(rr, cc):
        with np.errstate(divide="ignore"):
            return k * np.log(rr) - 0.5 * ((rr - cc) / sigma) ** 2 - _HALF_LOG_2PI

    peak = log_f(r_star, c)
    vals = np.exp(log_f(r, c[..., None]) - peak[..., None])
    total = vals @ _GL_W
    if not np.all(np.isfinite(total)) or np.any(total <= 0):
        raise NumericalError(
            f"radial integral quadrature failed (n={n}, sigma={sigma}, "
            f"c range [{float(np.min(c))}, {float(np.max(c))}])"
        )
    return peak + np.log(half * total)


def normal_direction_log_density(spec: ShiftedNormalSpec, directions):
    """Log density on the sphere of ``x/|x|`` for ``x ~ N(mu, sigma^2 I)``."""
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    n, sigma = spec.n, spec.sigma
    c = d @ spec.mu
    perp2 = np.maximum(float(spec.mu @ spec.mu) - c * c, 0.0)
    log_phi = -0.5 * perp2 / (sigma * sigma) - _HALF_LOG_2PI
    return (
        log_phi
        - n * math.log(sigma)
        - (0.5 * n - 1.0) * math.log(2.0 * math.pi)
        + log_radial_integral(n, c, sigma)
    )


def shifted_normal_sample(spec: ShiftedNormalSpec, rng: RandomStream, size: int) -> NormalDraws:
    """Draw ``size`` normal vectors, normalize, and weight those inside the cone.

    Rejected draws keep weight 0; accepted ones get ``1/f`` relative to the
    largest accepted weight in the batch.
    """
    rng = as_stream(rng)
    n = spec.n
    m = int(size)
    x = spec.mu + spec.sigma * rng.normal((m, n))
    d = x / np.linalg.norm(x, axis=1)[:, None]
    mu_hat = spec.mu / np.linalg.norm(spec.mu)
    accepted = d @ mu_hat >= math.cos(spec.theta0)
    log_w = np.full(m, -np.inf)
    if np.any(accepted):
        log_w[accepted] = -normal_direction_log_density(spec, d[accepted])
    w, spread = _relative_weights(log_w, accepted)
    return NormalDraws(WeightedSamples(d, w, spread), accepted)


def shifted_normal_accepted(spec: ShiftedNormalSpec, count: int, rng: RandomStream, batch: int = 20000):
    """Keep drawing until ``count`` draws are accepted.

    Returns ``(WeightedSamples of the first count accepted, total draws used)``.
    """
    rng = as_stream(rng)
    dirs = []
    got = 0
    draws = 0
    while got < count:
        x = spec.mu + spec.sigma * rng.normal((batch, spec.n))
        d = x / np.linalg.norm(x, axis=1)[:, None]
        mu_hat = spec.mu / np.linalg.norm(spec.mu)
        ok = np.flatnonzero(d @ mu_hat >= math.cos(spec.theta0))
        take = ok[: count - got]
        draws += int(take[-1]) + 1 if got + take.size == count else batch
        dirs.append(d[take])
        got += take.size
    d = np.concatenate(dirs)
    log_w = -normal_direction_log_density(spec, d)
    w, spread = _relative_weights(log_w)
    return WeightedSamples(d, w, spread), draws
