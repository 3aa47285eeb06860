"""O(n) generators of uniform directions on spheres, caps and hollow cones.

Directions are plain numpy arrays: shape ``(n,)`` for a single draw and
``(size, n)`` when a ``size`` is requested.  Every function takes its
:class:`~conesample.rng.RandomStream` explicitly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._errors import NumericalError, UnderflowError
from .anglemap import AngleMap
from .rng import RandomStream, as_stream

__all__ = [
    "ConeSpec",
    "HollowConeSpec",
    "as_direction",
    "sphere_point",
    "planar_angle_inverse",
    "planar_angle_rejection",
    "choose_method",
    "cap_point",
    "rotate_from_nth_axis",
    "hollow_cone_point",
    "sample_parallel",
    "METHODS",
]

METHODS = ("auto", "inverse", "rejection")

# auto picks inverse transform only while Theta(theta0) stays this far from underflow
INVERSE_MIN_FRACTION = 1e-280
AXIS_NORM_TOL = 1e-6
MAX_REJECTION_TRIALS = 10**9
_MAX_CHUNK = 1 << 21


def as_direction(v, tol: float = AXIS_NORM_TOL) -> np.ndarray:
    """Return ``v`` as a unit float vector.

    Inputs whose norm is within ``tol`` of 1 are renormalized; anything
    further off is rejected.
    """
    v = np.array(v, dtype=float).reshape(-1)
    if v.size < 2:
        raise ValueError("a direction needs at least 2 coordinates")
    if not np.all(np.isfinite(v)):
        raise ValueError("direction has non-finite coordinates")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"axis norm {float(norm)!r} deviates from 1 by more than {tol}")
    return v / norm


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """Cap of all unit vectors within planar angle ``theta0`` of ``axis``."""

    axis: np.ndarray
    theta0: float

    def __post_init__(self):
        object.__setattr__(self, "axis", as_direction(self.axis))
        self.axis.flags.writeable = False
        theta0 = float(self.theta0)
        if not 0.0 <= theta0 <= math.pi:
            raise ValueError(f"theta0 must lie in [0, pi], got {theta0!r}")
        object.__setattr__(self, "theta0", theta0)

    @property
    def n(self) -> int:
        return self.axis.size


@dataclass(frozen=True, eq=False)
class HollowConeSpec:
    """Band of unit vectors whose angle to ``axis`` lies in ``[theta1, theta2]``."""

    axis: np.ndarray
    theta1: float
    theta2: float

    def __post_init__(self):
        object.__setattr__(self, "axis", as_direction(self.axis))
        self.axis.flags.writeable = False
        t1, t2 = float(self.theta1), float(self.theta2)
        if not 0.0 <= t1 <= t2 <= math.pi:
            raise ValueError(f"need 0 <= theta1 <= theta2 <= pi, got {t1!r}, {t2!r}")
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t2)

    @property
    def n(self) -> int:
        return self.axis.size

    @classmethod
    def from_fractions(cls, axis, omega1: float, omega2: float) -> "HollowConeSpec":
        """Build the band between the caps holding solid angle fractions ``omega1 <= omega2``."""
        axis = as_direction(axis)
        if not 0.0 <= omega1 <= omega2 <= 1.0:
            raise ValueError(f"need 0 <= omega1 <= omega2 <= 1, got {omega1!r}, {omega2!r}")
        m = AngleMap(axis.size)
        return cls(axis, m.fraction_to_theta(omega1), m.fraction_to_theta(omega2))


def _check_dim(n, minimum):
    if int(n) != n or n < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def sphere_point(n: int, rng: RandomStream, size=None) -> np.ndarray:
    """Uniform point(s) on the unit sphere in R^n: normalized standard normals.

    For ``n == 1`` this is a fair choice of +1 or -1.
    """
    n = _check_dim(n, 1)
    rng = as_stream(rng)
    m = 1 if size is None else int(size)
    z = rng.normal((m, n))
    norm = np.linalg.norm(z, axis=1)
    bad = norm == 0.0
    while np.any(bad):
        z[bad] = rng.normal((int(bad.sum()), n))
        norm[bad] = np.linalg.norm(z[bad], axis=1)
        bad = norm == 0.0
    out = z / norm[:, None]
    return out[0] if size is None else out


def _check_theta0(theta0):
    theta0 = float(theta0)
    if not 0.0 < theta0 <= math.pi:
        raise ValueError(f"theta0 must lie in (0, pi], got {theta0!r}")
    return theta0


def planar_angle_inverse(theta0: float, n: int, rng: RandomStream, size=None):
    """Angle(s) to the axis for a uniform cap point, by inverse transform.

    Raises
    ------
    UnderflowError
        If the cap's solid angle fraction is not representable; use
        :func:`planar_angle_rejection` instead.
    """
    theta0 = _check_theta0(theta0)
    n = _check_dim(n, 2)
    rng = as_stream(rng)
    amap = AngleMap(n)
    omega0 = amap.theta_to_fraction(theta0)
    if omega0 < np.finfo(float).tiny:
        raise UnderflowError(
            f"solid angle fraction of a cap with theta0={theta0!r} underflows in n={n}; "
            "use the rejection method"
        )
    u = rng.uniform(1 if size is None else size, high=omega0)
    theta = np.minimum(amap.fraction_to_theta(u), theta0)
    return float(theta[0]) if size is None else theta


def planar_angle_rejection(theta0: float, n: int, rng: RandomStream, size=None, return_trials=False):
    """Angle(s) to the axis for a uniform cap point, by 1-D rejection in log space.

    Proposals are uniform on ``[0, theta0]`` and accepted against the
    envelope ``sin^(n-2)(min(theta0, pi/2))``.  With ``return_trials`` the
    number of proposals consumed is returned as well.
    """
    theta0 = _check_theta0(theta0)
    n = _check_dim(n, 2)
    rng = as_stream(rng)
    want = 1 if size is None else int(size)
    k = n - 2
    h = k * math.log(math.sin(min(theta0, 0.5 * math.pi)))
    cost = AngleMap(n).planar_rejection_cost(theta0).value or float(MAX_REJECTION_TRIALS)

    out = np.empty(want)
    filled = 0
    trials = 0
    while filled < want:
        chunk = int(min(max((want - filled) * cost * 1.1 + 64, 256), _MAX_CHUNK))
        u = rng.uniform(chunk)
        theta = rng.uniform(chunk, high=theta0)
        with np.errstate(divide="ignore", invalid="ignore"):
            if k == 0:
                ok = np.log(u) < 0.0
            else:
                ok = h + np.log(u) < k * np.log(np.sin(theta))
        idx = np.flatnonzero(ok)
        take = min(idx.size, want - filled)
        out[filled:filled + take] = theta[idx[:take]]
        filled += take
        trials += int(idx[take - 1]) + 1 if filled == want and take > 0 else chunk
        if trials > MAX_REJECTION_TRIALS:
            raise NumericalError(f"rejection sampler exceeded {MAX_REJECTION_TRIALS} proposals")
    res = float(out[0]) if size is None else out
    return (res, trials) if return_trials else res


def choose_method(theta0: float, n: int) -> str:
    """Inverse transform when the cap fraction is safely representable, else rejection."""
    if theta0 <= 0.0:
        return "inverse"
    log_omega = AngleMap(n).log_fraction(min(float(theta0), math.pi))
    return "inverse" if log_omega >= math.log(INVERSE_MIN_FRACTION) else "rejection"


def rotate_from_nth_axis(x, mu) -> np.ndarray:
    """Apply the simple rotation carrying ``e_n`` onto ``mu``.

    The rotation acts in the plane spanned by ``e_n`` and ``mu`` and fixes
    its orthogonal complement, so it costs O(n) per vector.  ``x`` may be a
    single vector or a stack of row vectors.
    """
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if x.shape[-1] != mu.size:
        raise ValueError("x and mu must have the same dimension")
    c = float(mu[-1])
    perp = mu.copy()
    perp[-1] = 0.0
    s = float(np.linalg.norm(perp))
    y = x.copy()
    if s == 0.0:
        if c < 0.0:
            y[..., -1] = -y[..., -1]
        return y
    u = perp / s
    r = math.hypot(c, s)
    c, s = c / r, s / r
    a = x[..., -1]
    b = x @ u
    # P (G - I) P^T x with P = [e_n, u]
    y[..., -1] += (c - 1.0) * a - s * b
    y += np.multiply.outer(s * a + (c - 1.0) * b, u)
    return y


def _assemble(theta, n, axis, rng):
    m = theta.size
    x = np.empty((m, n))
    x[:, :-1] = np.sin(theta)[:, None] * sphere_point(n - 1, rng, m)
    x[:, -1] = np.cos(theta)
    return rotate_from_nth_axis(x, axis)


def cap_point(spec: ConeSpec, rng: RandomStream, method: str = "auto", size=None) -> np.ndarray:
    """Uniform direction(s) on the spherical cap described by ``spec``.

    ``method`` selects how the planar angle is drawn: ``"inverse"``,
    ``"rejection"`` or ``"auto"``.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    rng = as_stream(rng)
    n = spec.n
    m = 1 if size is None else int(size)
    if spec.theta0 == 0.0:
        out = np.tile(spec.axis, (m, 1))
        return out[0] if size is None else out
    if method == "auto":
        method = choose_method(spec.theta0, n)
    if method == "inverse":
        theta = planar_angle_inverse(spec.theta0, n, rng, m)
    else:
        theta = planar_angle_rejection(spec.theta0, n, rng, m)
    out = _assemble(theta, n, spec.axis, rng)
    return out[0] if size is None else out


def hollow_cone_point(spec: HollowConeSpec, rng: RandomStream, size=None) -> np.ndarray:
    """Uniform direction(s) on the band between two coaxial caps.

    A zero-width band yields points on the single ring at ``theta1``.
    """
    rng = as_stream(rng)
    n = spec.n
    m = 1 if size is None else int(size)
    amap = AngleMap(n)
    if spec.theta1 == spec.theta2:
        theta = np.full(m, spec.theta1)
    else:
        om1, om2 = amap.theta_to_fraction(np.array([spec.theta1, spec.theta2]))
        width = om2 - om1
        if not width > 0.0:
            raise UnderflowError(
                f"solid angle of the band [{spec.theta1!r}, {spec.theta2!r}] is not "
                f"representable in n={n}"
            )
        u = rng.uniform(m)
        theta = amap.fraction_to_theta(np.minimum(u * width + om1, 1.0))
        theta = np.clip(theta, spec.theta1, spec.theta2)
    out = _assemble(theta, n, spec.axis, rng)
    return out[0] if size is None else out


def sample_parallel(draw, count: int, rng: RandomStream, threads: int) -> np.ndarray:
    """Run ``draw(stream, k)`` on ``threads`` substreams and stack the results.

    Worker ``i`` gets ``rng.spawn(threads)[i]`` and a near-equal share of
    ``count``; rows come back in worker order, so the output differs from
    a single-stream run with the same seed.
    """
    threads = max(1, int(threads))
    streams = as_stream(rng).spawn(threads)
    shares = [count // threads + (i < count % threads) for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda job: draw(job[0], job[1]), zip(streams, shares)))
    parts = [p for p, k in zip(parts, shares) if k > 0]
    return np.concatenate(parts, axis=0) if parts else np.empty((0,))
