"""The admissible interval and the scale/parameter bijection.

For m measurements the scales tau with m - D(tau) > max(0, C(tau)) form an
open interval; on it, map(tau) = tau (m - D - C)/sqrt(m - D) increases
strictly from 0 to infinity.  Inverting it converts any regularization
parameter into a scale, which is what the error prediction consumes.
"""

import numpy as np

from lassopred import Geometry, L1, RegularizerSpec, map_inverse, map_tau, region

n, m, k = 1000, 500, 100
spec = RegularizerSpec(kind=L1, n=n, support=tuple(range(k)), signs=np.ones(k))
geom = Geometry(spec=spec, m=m)

tau_lo, tau_hi = region(geom)
print(f"n = {n}, m = {m}, k = {k}")
print(f"admissible interval: ({tau_lo:.6f}, {tau_hi:.6f})\n")

print(f"{'tau':>8} {'map(tau)':>14}")
for tau in np.linspace(tau_lo + 0.02, tau_hi - 0.02, 9):
    print(f"{tau:8.4f} {map_tau(geom, tau):14.6f}")

print("\nround trips through the inverse:")
for lam in (1.0, 5.0, 15.0, 60.0):
    tau = map_inverse(geom, lam)
    back = map_tau(geom, tau)
    print(f"  lambda = {lam:6.2f} -> tau = {tau:.8f} -> map(tau) = {back:.8f}")
