"""
Fourier coefficients of the integrand
=====================================

The Cauchy integrand at a target close to the curve needs many modes. Once
the singular factor is divided out the rest decays fast, whatever the
distance.
"""

import numpy as np

from periodic_ssq import experiments

geom = experiments.starfish()
for t_star in (1 + 0.05j, 1 + 0.005j):
    k, chat, fhat = experiments.decay_data(geom, t_star, 401)
    for name, c in (("integrand", chat), ("regularized", fhat)):
        mask = (k < 0) & (c > 1e-13 * c.max())
        slope = np.polyfit(-k[mask], np.log(c[mask]), 1)[0]
        print("t* = %s  %-12s slope %.3f" % (t_star, name, slope))

# On the unit circle with a constant density the regularized integrand is
# a single Fourier mode.
k, chat, fhat = experiments.decay_data(experiments.circle(), 1 + 0.05j, 65, "one")
print("circle: modes above 1e-13:", k[fhat > 1e-13])
