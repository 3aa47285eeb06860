"""Special functions behind the angle map.

Everything here works on floats or numpy arrays and keeps gamma/beta
arithmetic in log space so that dimensions in the thousands stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._errors import NumericalError

__all__ = [
    "BetaParams",
    "log_gamma",
    "log_beta",
    "reg_inc_beta",
    "log_reg_inc_beta",
    "inv_reg_inc_beta",
    "sphere_surface_area",
    "log_sphere_surface_area",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

CF_MAX_ITER = 300
CF_TOL = 1e-15
INV_MAX_ITER = 100
INV_TOL = 1e-12

_TINY = 1e-300


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters ``(alpha, beta)`` of a beta distribution."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _lanczos_log_gamma(x):
    # valid for x >= 0.5
    z = x - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(x):
    """Natural log of the gamma function for positive ``x``.

    Lanczos approximation (g=7, 9 terms), with the reflection formula
    below 1/2.
    """
    x, scalar = _as_float(x)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("log_gamma requires finite positive arguments")
    small = x < 0.5
    out = np.empty_like(x)
    big = ~small
    out[big] = _lanczos_log_gamma(x[big])
    if np.any(small):
        xs = x[small]
        # Gamma(x) Gamma(1-x) = pi / sin(pi x), and sin(pi x) > 0 on (0, 1/2)
        out[small] = math.log(math.pi) - np.log(np.sin(math.pi * xs)) - _lanczos_log_gamma(1.0 - xs)
    return _out(out, scalar)


def _log_beta(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(np.add(a, b))


def log_beta(p: BetaParams) -> float:
    """ln B(alpha, beta)."""
    return float(_log_beta(p.alpha, p.beta))


def _log1mexp(v):
    """log(1 - exp(v)) for v <= 0."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(v > -math.log(2.0), np.log(-np.expm1(v)), np.log1p(-np.exp(v)))


def _betacf(x, a, b):
    """Continued fraction for I_x(a, b), modified Lentz; vectorized.

    Entries are frozen as soon as their own increment converges.
    """
    x, a, b = np.broadcast_arrays(x, a, b)
    out = np.empty(x.shape)
    idx = np.arange(x.size)
    x, a, b = x.ravel(), a.ravel(), b.ravel()
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    flat = out.ravel()
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = h * d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        conv = np.abs(delta - 1.0) < CF_TOL
        if np.any(conv):
            flat[idx[conv]] = h[conv]
            keep = ~conv
            idx, x, a, b, c, d, h = idx[keep], x[keep], a[keep], b[keep], c[keep], d[keep], h[keep]
            qab, qap, qam = qab[keep], qap[keep], qam[keep]
            if idx.size == 0:
                return out
    raise NumericalError(
        f"incomplete beta continued fraction did not converge in {CF_MAX_ITER} iterations"
    )


def _log_betainc_pair(x, a, b, xc=None):
    """Return ``(log I_x(a,b), log(1 - I_x(a,b)))``.

    ``xc`` is ``1 - x`` when the caller knows it more accurately than the
    subtraction would give (e.g. ``cos^2`` next to ``sin^2``).
    """
    x = np.asarray(x, dtype=float)
    xc = 1.0 - x if xc is None else np.asarray(xc, dtype=float)
    a = np.broadcast_to(np.asarray(a, dtype=float), x.shape)
    b = np.broadcast_to(np.asarray(b, dtype=float), x.shape)
    log_i = np.empty(x.shape)
    log_ic = np.empty(x.shape)

    at0 = x <= 0.0
    at1 = xc <= 0.0
    log_i[at0], log_ic[at0] = -np.inf, 0.0
    log_i[at1], log_ic[at1] = 0.0, -np.inf
    inner = ~(at0 | at1)
    if np.any(inner):
        xi, xci, ai, bi = x[inner], xc[inner], a[inner], b[inner]
        front = ai * np.log(xi) + bi * np.log(xci) - _log_beta(ai, bi)
        swap = xi > (ai + 1.0) / (ai + bi + 2.0)
        cf_x = np.where(swap, xci, xi)
        cf_a = np.where(swap, bi, ai)
        cf_b = np.where(swap, ai, bi)
        tail = front + np.log(_betacf(cf_x, cf_a, cf_b)) - np.log(cf_a)
        tail = np.minimum(tail, 0.0)
        li = np.where(swap, _log1mexp(tail), tail)
        lic = np.where(swap, tail, _log1mexp(tail))
        log_i[inner] = li
        log_ic[inner] = lic
    return log_i, log_ic


def _check_unit_interval(v, name):
    if not np.all((v >= 0.0) & (v <= 1.0)):
        raise ValueError(f"{name} must lie in [0, 1]")


def reg_inc_beta(x, p: BetaParams):
    """Regularized incomplete beta function I_x(alpha, beta)."""
    x, scalar = _as_float(x)
    _check_unit_interval(x, "x")
    log_i, _ = _log_betainc_pair(x, p.alpha, p.beta)
    return _out(np.exp(log_i), scalar)


def log_reg_inc_beta(x, p: BetaParams):
    """log I_x(alpha, beta), accurate where I_x itself would underflow."""
    x, scalar = _as_float(x)
    _check_unit_interval(x, "x")
    log_i, _ = _log_betainc_pair(x, p.alpha, p.beta)
    return _out(log_i, scalar)


def _inv_lower(q, a, b):
    """Solve I_x(a, b) = q for x, with 0 < q <= 1/2 (arrays).

    Newton's method on log I_x - log q with a bisection fallback whenever
    a step leaves the current bracket.
    """
    log_q = np.log(q)
    lb = _log_beta(a, b)
    # lower-tail power law I_x ~ x^a / (a B(a,b))
    x = np.exp((log_q + math.log(a) + lb) / a)
    x = np.clip(x, _TINY, 1.0 - 1e-12)
    x = np.where(np.isfinite(x), x, 0.5)
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(INV_MAX_ITER):
        act = ~done
        xa = x[act]
        log_i, _ = _log_betainc_pair(xa, a, b)
        h = log_i - log_q[act]
        above = h > 0
        hi_a = np.where(above, xa, hi[act])
        lo_a = np.where(above, lo[act], xa)
        log_pdf = (a - 1.0) * np.log(xa) + (b - 1.0) * np.log1p(-xa) - lb
        x_new = xa - h * np.exp(log_i - log_pdf)
        conv = (np.abs(h) <= INV_TOL) | (np.abs(x_new - xa) <= 1e-15 * xa)
        # root below the normal range: x itself is as good as representable
        conv |= hi_a <= _TINY
        outside = ~((x_new > lo_a) & (x_new < hi_a)) | ~np.isfinite(x_new)
        # geometric midpoint keeps tiny roots reachable; lower end floored
        geometric = np.sqrt(np.maximum(lo_a, 1e-6 * hi_a) * hi_a)
        bisect = np.where(hi_a < 2.0 * lo_a, 0.5 * (lo_a + hi_a), geometric)
        # a converged entry keeps its final Newton polish when it stays bracketed
        x_new = np.where(outside, np.where(conv, xa, bisect), x_new)
        x[act] = x_new
        lo[act], hi[act] = lo_a, hi_a
        done[act] = conv
        if np.all(done):
            return x
    raise NumericalError(f"inverse incomplete beta did not converge in {INV_MAX_ITER} iterations")


def _inv_pair(y, a, b):
    """Return ``(x, 1 - x)`` with I_x(a, b) = y, each computed without cancellation."""
    y = np.asarray(y, dtype=float)
    x = np.empty(y.shape)
    xc = np.empty(y.shape)
    zero = y <= 0.0
    one = y >= 1.0
    low = ~zero & ~one & (y <= 0.5)
    high = ~zero & ~one & ~low
    x[zero], xc[zero] = 0.0, 1.0
    x[one], xc[one] = 1.0, 0.0
    if np.any(low):
        r = _inv_lower(y[low], a, b)
        x[low], xc[low] = r, 1.0 - r
    if np.any(high):
        r = _inv_lower(1.0 - y[high], b, a)
        x[high], xc[high] = 1.0 - r, r
    return x, xc


def inv_reg_inc_beta(y, p: BetaParams):
    """Inverse of :func:`reg_inc_beta` in its first argument.

    Raises
    ------
    ValueError
        If ``y`` is outside [0, 1].
    NumericalError
        If the Newton/bisection iteration does not converge.
    """
    y, scalar = _as_float(y)
    _check_unit_interval(y, "y")
    x, _ = _inv_pair(y, p.alpha, p.beta)
    return _out(x, scalar)


def log_sphere_surface_area(n) -> float:
    """ln s_n, where s_n = 2 pi^(n/2) / Gamma(n/2)."""
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n)


def sphere_surface_area(n) -> float:
    """Surface area of the unit sphere embedded in R^n."""
    return math.exp(log_sphere_surface_area(n))
