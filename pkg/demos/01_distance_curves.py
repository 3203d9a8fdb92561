"""Gaussian distance curves: closed form vs Monte Carlo.

The toolkit's central object is the pair (D, C): the expected squared
distance from a standard Gaussian vector to the scaled subdifferential, and
the correlation between the projection residual and the projection.  For
sparse signals both have closed forms; for everything else a seeded Monte
Carlo estimator does the job.  This script prints both side by side.
"""

import numpy as np

from lassopred import RegularizerSpec, L1, dc_closed_l1, dc_monte_carlo

n, k = 200, 20
spec = RegularizerSpec(kind=L1, n=n, support=tuple(range(k)), signs=np.ones(k))

print(f"sparse structure: n = {n}, k = {k}, 20000 Monte Carlo samples per tau\n")
print(f"{'tau':>5} {'D closed':>12} {'D mc':>12} {'dev/se':>7}   "
      f"{'C closed':>12} {'C mc':>12} {'dev/se':>7}")
for tau in (0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
    closed = dc_closed_l1(n, k, tau)
    mc = dc_monte_carlo(spec, tau, samples=20_000, seed=1)
    dd = abs(closed.D - mc.D) / mc.stderr_D if mc.stderr_D else 0.0
    dc = abs(closed.C - mc.C) / mc.stderr_C if mc.stderr_C else 0.0
    print(f"{tau:5.2f} {closed.D:12.4f} {mc.D:12.4f} {dd:7.2f}   "
          f"{closed.C:12.4f} {mc.C:12.4f} {dc:7.2f}")

print("\nThe two agree within a few standard errors at every scale; the same")
print("Monte Carlo path serves structures without closed forms (block sparsity).")
