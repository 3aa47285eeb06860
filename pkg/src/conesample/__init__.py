"""Uniform random directions in n-dimensional cones, in O(n) work per sample."""

from ._errors import NumericalError, UnderflowError
from .anglemap import AngleMap, Cost
from .rng import RandomStream
from .sampler import (
    ConeSpec,
    HollowConeSpec,
    cap_point,
    hollow_cone_point,
    planar_angle_inverse,
    planar_angle_rejection,
    rotate_from_nth_axis,
    sphere_point,
)
from .specfun import BetaParams, inv_reg_inc_beta, log_beta, log_gamma, reg_inc_beta, sphere_surface_area
from .stats import KsReport, ThetaDistribution, angles_to_axis, ks_statistic

__version__ = "0.1.0"

__all__ = [
    "AngleMap",
    "BetaParams",
    "ConeSpec",
    "Cost",
    "HollowConeSpec",
    "KsReport",
    "NumericalError",
    "RandomStream",
    "ThetaDistribution",
    "UnderflowError",
    "angles_to_axis",
    "cap_point",
    "hollow_cone_point",
    "inv_reg_inc_beta",
    "ks_statistic",
    "log_beta",
    "log_gamma",
    "planar_angle_inverse",
    "planar_angle_rejection",
    "reg_inc_beta",
    "rotate_from_nth_axis",
    "sphere_point",
    "sphere_surface_area",
]
