"""
Laplace Dirichlet problem on a starfish
=======================================

Solve for a double-layer density whose potential matches
``log|3 + 3i - z|`` on the boundary, then evaluate it on a grid with
and without special quadrature near the curve.
"""

import numpy as np

from periodic_ssq import experiments, ssq

# 400 nodes and a 400 x 400 grid over the bounding box of the curve
res = experiments.laplace_demo(n=400, grid=400)
print("interior grid points:", len(res["u"]))
print("condition estimate of the system: %.1f" % res["solution"].system_condition_estimate)

err = res["abs_error"]
for method in (ssq.SSQ, ssq.TRAPEZOIDAL):
    sel = res["method"] == method
    print("%-12s %6d points, max error %.2e" % (method, sel.sum(), err[sel].max()))

# The same grid with the plain rule everywhere. Points close to the
# boundary lose all accuracy.
plain = experiments.laplace_demo(n=400, grid=400, force=ssq.TRAPEZOIDAL)
near = plain["near"]
print("plain rule near the boundary: max error %.2e" % plain["abs_error"][near].max())

# error against distance to the boundary, in a few bins
d = np.min(np.abs(res["disc"].gamma[None, :] - (res["x"] + 1j * res["y"])[:, None]), axis=1)
for lo, hi in [(0, 1e-3), (1e-3, 1e-2), (1e-2, 1e-1), (1e-1, 1)]:
    sel = (d >= lo) & (d < hi)
    if sel.any():
        print("dist in [%g, %g): ssq %.1e   plain %.1e"
              % (lo, hi, err[sel].max(), plain["abs_error"][sel].max()))
