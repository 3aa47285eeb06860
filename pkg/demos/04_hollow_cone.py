"""Sampling a band between two polar angles, by angle or by surface fraction.

The band is handled by drawing the surface fraction uniformly between the
fractions of its two bounding caps, then mapping back to an angle.
"""

import numpy as np

from conesample import HollowConeSpec, RandomStream, hollow_cone_point
from conesample.stats import angles_to_axis

n = 50
axis = np.eye(n)[0]

spec = HollowConeSpec(axis, np.pi / 3, np.pi / 2)
x = hollow_cone_point(spec, RandomStream(4), size=5000)
th = angles_to_axis(x, axis)
print(f"angles in [{th.min():.4f}, {th.max():.4f}], requested [{np.pi / 3:.4f}, {np.pi / 2:.4f}]")

# a band given as surface fractions: the 10% of the sphere just above the equator
spec = HollowConeSpec.from_fractions(axis, 0.4, 0.5)
print(f"fractions 0.4..0.5 correspond to angles {spec.theta1:.4f}..{spec.theta2:.4f}")
x = hollow_cone_point(spec, RandomStream(5), size=5000)
th = angles_to_axis(x, axis)
print(f"sampled angles in [{th.min():.4f}, {th.max():.4f}]")
