"""The deterministic scalar saddle behind the prediction.

The error prediction can be reproduced without the map machinery by solving
a two-variable min-max problem numerically; its optimal alpha is the square
root of the predicted error.  This script pits the nested derivative-free
search against the closed-form saddle.
"""

import numpy as np

from lassopred import (
    Geometry,
    L1,
    RegularizerSpec,
    closed_form_saddle,
    predict_nse,
    solve_saddle_numeric,
    tune,
)

n, m, k = 1000, 500, 100
spec = RegularizerSpec(kind=L1, n=n, support=tuple(range(k)), signs=np.ones(k))
geom = Geometry(spec=spec, m=m)
lam_best, _, _ = tune(geom)

for label, lam in (("lambda_best / 3", lam_best / 3),
                   ("lambda_best", lam_best),
                   ("3 * lambda_best", 3 * lam_best)):
    closed = closed_form_saddle(geom, lam)
    numeric = solve_saddle_numeric(geom, lam, 4 * closed.alpha_star, 4 * closed.beta_star)
    eta = predict_nse(geom, lam).eta
    print(f"{label} = {lam:.4f}")
    print(f"  closed form : alpha* = {closed.alpha_star:.10f}, beta* = {closed.beta_star:.10f}")
    print(f"  nested search: alpha* = {numeric.alpha_star:.10f}, beta* = {numeric.beta_star:.10f}")
    print(f"  alpha*^2 = {closed.alpha_star**2:.10f}  vs  eta(lambda) = {eta:.10f}\n")
