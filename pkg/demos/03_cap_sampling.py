"""Uniform sampling on a spherical cap, with a goodness-of-fit check.

A cap point is a planar angle drawn from its exact law, a uniform point on
the (n-2)-sphere orthogonal to the pole, and one rotation that carries the
pole to the requested axis.  Both angle methods are shown; the KS distance
to the exact angle law shrinks like N^(-1/2).
"""

import numpy as np

from conesample import ConeSpec, RandomStream, cap_point
from conesample.stats import ThetaDistribution, angles_to_axis, histogram, ks_statistic

n, theta0 = 100, np.pi / 4
axis = RandomStream(1).normal(n)
axis /= np.linalg.norm(axis)
spec = ConeSpec(axis, theta0)
law = ThetaDistribution(n, theta0)

for method in ("inverse", "rejection"):
    x = cap_point(spec, RandomStream(2), method, size=10**4)
    th = angles_to_axis(x, axis)
    print(f"{method:9s}: max |norm - 1| = {np.max(np.abs(np.linalg.norm(x, axis=1) - 1)):.1e}, "
          f"max angle {th.max():.4f} <= {theta0:.4f}")
    for m in (100, 1000, 10000):
        rep = ks_statistic(th[:m], law)
        print(f"    N={m:6d}  D_N={rep.statistic:.4f}  1% critical {rep.critical_value_1pct:.4f}  "
              f"passed={rep.passed}")

# angle histogram against the exact density, n=10
n = 10
x = cap_point(ConeSpec(np.eye(n)[-1], theta0), RandomStream(3), size=10**4)
left, dens = histogram(angles_to_axis(x, np.eye(n)[-1]), 10, (0.0, theta0))
mid = left + theta0 / 20
print("\nn=10 angle density, histogram vs exact")
for a, b, c in zip(mid, dens, ThetaDistribution(n, theta0).pdf(mid)):
    print(f"  {a:.3f}  {b:7.4f}  {c:7.4f}")
