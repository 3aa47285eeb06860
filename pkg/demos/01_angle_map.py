"""The angle map between a polar angle and the surface fraction it cuts off.

For a unit sphere in R^n, the fraction of surface with polar angle below
theta is a regularized incomplete beta function of sin^2(theta).  This
script checks it against the elementary closed forms for n = 2 and n = 3,
shows the inverse, and prints how quickly the fraction collapses with n.
"""

import numpy as np

from conesample import AngleMap, BetaParams, inv_reg_inc_beta, reg_inc_beta

theta = np.linspace(0.0, np.pi, 7)

print("n=2 fraction vs theta/pi")
print(np.c_[theta, AngleMap(2).theta_to_fraction(theta), theta / np.pi])

print("\nn=3 fraction vs (1 - cos theta)/2")
print(np.c_[theta, AngleMap(3).theta_to_fraction(theta), (1 - np.cos(theta)) / 2])

# inverse map; the round trip is exact to rounding
m = AngleMap(10)
om = m.theta_to_fraction(theta[1:-1])
print("\nn=10 round trip error:", np.max(np.abs(m.fraction_to_theta(om) - theta[1:-1])))

# the beta function pair on its own
p = BetaParams(2.5, 0.5)
y = reg_inc_beta(0.3, p)
print(f"\nI_0.3(2.5, 0.5) = {float(y):.15f}, inverse gives {float(inv_reg_inc_beta(y, p)):.15f}")

# the cap fraction at pi/4 decays geometrically with dimension
for n in (10, 100, 1000, 5000):
    print(f"n={n:5d}  log10 fraction of pi/4 cap = {AngleMap(n).log_fraction(np.pi / 4) / np.log(10):9.3f}")
