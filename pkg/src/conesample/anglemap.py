"""Planar angle <-> solid angle fraction map for the unit sphere in R^n.

``Theta(theta)`` is the fraction of the sphere's surface lying within
planar angle ``theta`` of a fixed axis.  With ``x = sin^2 theta`` it is
``I_x((n-1)/2, 1/2) / 2`` on ``[0, pi/2]`` and one minus that on
``[pi/2, pi]``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional

import numpy as np

from .specfun import BetaParams, _inv_pair, _log_beta, _log_betainc_pair, log_gamma

__all__ = ["AngleMap", "Cost"]

_LN10 = math.log(10.0)
_LOG_HALF = math.log(0.5)
# largest log10 value whose linear counterpart is a finite double
_MAX_LOG10 = math.log10(np.finfo(float).max)


class Cost(NamedTuple):
    """A sample-count cost, kept in log10 so it survives overflow.

    ``value`` is ``None`` when ``10**log10`` is not representable.
    """

    log10: float
    value: Optional[float]

    @classmethod
    def from_log(cls, log_value: float) -> "Cost":
        l10 = log_value / _LN10
        return cls(l10, 10.0**l10 if l10 < _MAX_LOG10 else None)


class AngleMap:
    """Evaluator of ``Theta``, its inverse, and the sampling cost models for one dimension.

    Parameters
    ----------
    n : int
        Dimension of the ambient space, at least 2.
    """

    def __init__(self, n: int):
        if int(n) != n or n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
        self._n = int(n)
        self._alpha = 0.5 * (self._n - 1)
        self._beta_params = BetaParams(self._alpha, 0.5)
        self._log_b = float(_log_beta(self._alpha, 0.5))

    @property
    def n(self) -> int:
        return self._n

    @property
    def beta_params(self) -> BetaParams:
        return self._beta_params

    def __repr__(self):
        return f"AngleMap(n={self._n})"

    def __eq__(self, other):
        return isinstance(other, AngleMap) and other._n == self._n

    def __hash__(self):
        return hash(("AngleMap", self._n))

    # -- the map itself ------------------------------------------------

    def _check_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if not np.all((theta >= 0.0) & (theta <= math.pi)):
            raise ValueError("theta must lie in [0, pi]")
        return theta

    def _log_pair(self, theta):
        """``(log Theta, log(1 - Theta))`` for an array of angles in [0, pi]."""
        s = np.sin(theta)
        c = np.cos(theta)
        log_i, log_ic = _log_betainc_pair(s * s, self._alpha, 0.5, xc=c * c)
        # half of I, and one minus half of I
        log_half_i = _LOG_HALF + log_i
        log_one_minus_half_i = np.log1p(-0.5 * np.exp(log_i))
        upper = theta > 0.5 * math.pi
        log_f = np.where(upper, log_one_minus_half_i, log_half_i)
        log_fc = np.where(upper, log_half_i, log_one_minus_half_i)
        return log_f, log_fc

    def theta_to_fraction(self, theta):
        """Solid angle fraction of the cap of half-angle ``theta``."""
        theta = self._check_theta(theta)
        log_f, _ = self._log_pair(np.atleast_1d(theta))
        out = np.exp(log_f)
        return float(out[0]) if theta.ndim == 0 else out

    def log_fraction(self, theta):
        """Natural log of :meth:`theta_to_fraction`, finite even where the fraction underflows."""
        theta = self._check_theta(theta)
        log_f, _ = self._log_pair(np.atleast_1d(theta))
        return float(log_f[0]) if theta.ndim == 0 else log_f

    def fraction_to_theta(self, omega):
        """Inverse of :meth:`theta_to_fraction`."""
        omega = np.asarray(omega, dtype=float)
        if not np.all((omega >= 0.0) & (omega <= 1.0)):
            raise ValueError("omega must lie in [0, 1]")
        om = np.atleast_1d(omega)
        upper = om > 0.5
        y = np.where(upper, 2.0 * (1.0 - om), 2.0 * om)
        x, xc = _inv_pair(y, self._alpha, 0.5)
        # sin^2 = x, cos^2 = xc; atan2 keeps full precision near 0 and pi/2
        theta = np.arctan2(np.sqrt(x), np.sqrt(xc))
        theta = np.where(upper, math.pi - theta, theta)
        return float(theta[0]) if omega.ndim == 0 else theta

    # -- cost models ---------------------------------------------------

    def _positive_angle(self, theta):
        theta = float(theta)
        if not theta > 0.0:
            raise ValueError(f"angle must be positive, got {theta!r}")
        if theta > math.pi:
            raise ValueError(f"angle must not exceed pi, got {theta!r}")
        return theta

    def rejection_cost(self, theta) -> Cost:
        """Expected full-sphere draws per draw landing in the cap, ``1/Theta(theta)``."""
        theta = self._positive_angle(theta)
        return Cost.from_log(-self.log_fraction(theta))

    def rejection_cost_small_angle(self, theta) -> Cost:
        """Small-angle, large-n approximation ``sqrt(2 pi e (n-1)) / theta^(n-1)``."""
        theta = float(theta)
        if not theta > 0.0:
            raise ValueError(f"angle must be positive, got {theta!r}")
        m = self._n - 1
        log_cost = 0.5 * math.log(2.0 * math.pi * math.e * m) - m * math.log(theta)
        return Cost.from_log(log_cost)

    def planar_rejection_cost(self, theta0) -> Cost:
        """Expected proposals per accepted angle in the one-dimensional rejection sampler."""
        theta0 = self._positive_angle(theta0)
        n = self._n
        log_ratio = log_gamma(0.5 * n) - log_gamma(0.5 * (n - 1))
        sin_env = math.sin(min(theta0, 0.5 * math.pi))
        log_cost = (
            -0.5 * math.log(math.pi)
            + log_ratio
            + math.log(theta0)
            + (n - 2) * math.log(sin_env)
            - self.log_fraction(theta0)
        )
        return Cost.from_log(log_cost)

    def log_density_constant(self) -> float:
        """ln(s_{n-1}/s_n) = ln(1/B((n-1)/2, 1/2)); the constant in front of sin^(n-2)."""
        return -self._log_b
