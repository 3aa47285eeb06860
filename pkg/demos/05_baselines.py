"""Importance-reweighted baselines compared with direct cap sampling.

Two simple alternatives produce cap directions with a known but non-uniform
density: projecting a uniform ball shifted along the axis, and normalizing a
shifted Gaussian, rejecting directions outside the cap.  Weighting each
direction by the inverse density recovers the uniform law, but the weights
become degenerate as the dimension grows, so the KS distance converges more
slowly than for direct sampling.
"""

import numpy as np

from conesample import ConeSpec, RandomStream, cap_point
from conesample.baselines import (
    ShiftedNormalSpec,
    ShiftedSphereSpec,
    shifted_normal_accepted,
    shifted_normal_sample,
    shifted_sphere_sample,
)
from conesample.stats import ThetaDistribution, angles_to_axis, ks_statistic, weighted_ks_statistic

theta0 = np.pi / 4
counts = (100, 1000, 10000)


def report(name, n, th, w):
    law = ThetaDistribution(n, theta0)
    d = [weighted_ks_statistic(th[:m], w[:m], law).statistic for m in counts]
    print(f"  {name:24s}" + "".join(f"{v:9.4f}" for v in d))


for n in (10, 100):
    axis = np.eye(n)[-1]
    base, prop = RandomStream(n).spawn(2)
    print(f"n={n}, D_N at N =" + "".join(f"{m:9d}" for m in counts))
    ws = shifted_sphere_sample(ShiftedSphereSpec(axis, theta0), base, counts[-1])
    report("shifted sphere", n, angles_to_axis(ws.directions, axis), ws.weights)
    if n == 100:
        for sigma in (0.08, 0.12):
            spec = ShiftedNormalSpec(axis, sigma, theta0)
            ws, used = shifted_normal_accepted(spec, counts[-1], base)
            report(f"shifted normal s={sigma}", n, angles_to_axis(ws.directions, axis), ws.weights)
    x = cap_point(ConeSpec(axis, theta0), prop, size=counts[-1])
    th = angles_to_axis(x, axis)
    report("direct", n, th, np.ones(th.size))

# the Gaussian baseline rejects most draws unless sigma is tuned
for sigma in (0.08, 0.12):
    draws = shifted_normal_sample(ShiftedNormalSpec(np.eye(100)[-1], sigma, theta0), RandomStream(9), 10**5)
    print(f"sigma={sigma}: acceptance fraction {draws.acceptance_fraction:.4f}, "
          f"log weight range {draws.samples.log_weight_range:.1f}")

# unweighted, the shifted-sphere angles are plainly not uniform on the cap
ws = shifted_sphere_sample(ShiftedSphereSpec(np.eye(10)[-1], theta0), RandomStream(1), 10**4)
rep = ks_statistic(angles_to_axis(ws.directions, np.eye(10)[-1]), ThetaDistribution(10, theta0))
print(f"shifted sphere without weights: D_N={rep.statistic:.4f}, passed={rep.passed}")
