"""Expected cost of rejection sampling a cap from the whole sphere.

Drawing uniform sphere points until one lands in the cap costs 1/fraction
trials on average, which grows exponentially with dimension.  The planar
angle itself can be rejection sampled at a cost that grows only slowly.
Costs are carried in log10 so they stay usable after the value overflows.
"""

import numpy as np

from conesample import AngleMap, RandomStream
from conesample.sampler import planar_angle_rejection

angles = {"pi/5": np.pi / 5, "pi/4": np.pi / 4, "pi/3": np.pi / 3}

print("log10 of the full-sphere rejection cost")
print("    n " + "".join(f"{k:>10s}" for k in angles))
for n in (2, 5, 10, 20, 40, 80, 100):
    row = [AngleMap(n).rejection_cost(t).log10 for t in angles.values()]
    print(f"{n:5d} " + "".join(f"{v:10.3f}" for v in row))

# for narrow caps the small-angle form overestimates by a constant factor
n, t = 1000, 1e-3
exact = AngleMap(n).rejection_cost(t).log10
approx = AngleMap(n).rejection_cost_small_angle(t).log10
print(f"\nn={n}, theta={t}: exact {exact:.4f}, small-angle {approx:.4f}, "
      f"ratio exact/approx {10 ** (exact - approx):.4f} (1/sqrt(e) = {np.exp(-0.5):.4f})")

# planar-angle rejection: formula against observed trials
print("\nplanar angle rejection, trials per accepted angle")
for n in (100, 1000):
    for name, t0 in angles.items():
        _, trials = planar_angle_rejection(t0, n, RandomStream(n), 4000, return_trials=True)
        print(f"n={n:5d} {name}: formula {AngleMap(n).planar_rejection_cost(t0).value:8.2f}, "
              f"observed {trials / 4000:8.2f}")
