"""Optimal tuning and the robustness phase transition.

The predicted error eta(lambda) is U-shaped with a closed-form minimizer:
lambda_best = tau_best * sqrt(m - D(tau_best)) where tau_best minimizes D.
As the number of measurements m falls toward min D, the best achievable
error blows up; below that threshold no parameter gives robust recovery.
"""

import numpy as np

from lassopred import (
    BelowPhaseTransitionError,
    Geometry,
    L1,
    RegularizerSpec,
    phase_diagnostics,
    predict_nse,
    tune,
)

n, k = 1000, 100
spec = RegularizerSpec(kind=L1, n=n, support=tuple(range(k)), signs=np.ones(k))

geom = Geometry(spec=spec, m=500)
lam_best, tau_best, eta_min = tune(geom)
print(f"n = {n}, m = 500, k = {k}")
print(f"lambda_best = {lam_best:.6f}, tau_best = {tau_best:.6f}, eta_min = {eta_min:.6f}\n")

print("the prediction is U-shaped around lambda_best:")
for factor in (0.2, 0.5, 1.0, 2.0, 5.0):
    lam = factor * lam_best
    print(f"  eta({factor:4.1f} * lambda_best) = {predict_nse(geom, lam).eta:10.6f}")

d_star = phase_diagnostics(geom)[0]
print(f"\nphase transition at m = min D = {d_star:.2f}; sweeping m downward:")
for m in (658, 420, 360, 335, 330, 329):
    _, robust, minimax = phase_diagnostics(Geometry(spec=spec, m=m))
    print(f"  m = {m:4d}: minimax NSE = {minimax:12.3f}")

try:
    tune(Geometry(spec=spec, m=328))
except BelowPhaseTransitionError as exc:
    print(f"  m =  328: {exc}")
