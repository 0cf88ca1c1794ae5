"""
Convergence against the number of nodes
=======================================

Targets sit at ``gamma(t*)`` with ``Im t* = d``. The plain rule converges
like ``exp(-N d)``; special quadrature converges at a rate that hardly
depends on ``d``.
"""

import numpy as np

from periodic_ssq import experiments

geom = experiments.starfish()
ns = list(range(50, 650, 50))

rows = experiments.convergence_table(geom, "cauchy", ["interior"], ns)
for d in experiments.DEFAULT_D:
    sel = [r for r in rows if r["d"] == d]
    trap = [r["err_trapz"] for r in sel]
    fast = [r["err_ssq"] for r in sel]
    print("d = %.2f" % d)
    for r in sel:
        print("  N=%4d  trapezoidal %.1e  ssq %.1e" % (r["N"], r["err_trapz"], r["err_ssq"]))
    # the fit window [1e-12, 1e-2] may hold too few plain-rule points at small d
    try:
        print("  trapezoidal rate %.4f" % experiments.fit_rate(ns, trap))
    except ValueError:
        print("  trapezoidal rate: too few points inside the fit window")
    print("  ssq rate %.4f" % experiments.fit_rate(ns, fast))

# Higher powers of the kernel reach a higher floor.
for kernel in ("power2", "power3"):
    errs = [experiments.convergence_row(geom, kernel, "interior", 0.01, n)["err_ssq"]
            for n in (300, 400, 500, 600)]
    print(kernel, " ".join("%.1e" % e for e in errs))
