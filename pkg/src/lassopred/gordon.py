"""Deterministic scalar min-max problem behind the error prediction.

The random comparison argument reduces the solver's error analysis to a
two-variable deterministic saddle problem.  With lam_b = lam / (beta*sqrt(m)),

    dt(alpha, beta) = sqrt(alpha^2 + 1) * beta
                      - alpha * beta * sqrt(D(lam_b) / m)
                      - beta^2 / 2,

minimized over alpha >= 0 and maximized over beta > 0.  The optimal alpha is
the limit of the solution error measured in noise units, i.e. the square root
of the predicted normalized squared error, so the saddle found numerically
must agree with the closed forms

    alpha* = sqrt( D(tau*) / (m - D(tau*)) ),   beta* = lam / (tau* sqrt(m)),

with tau* = map^{-1}(lam).  Both routes are implemented; their agreement is a
cross-module consistency check.

Only the noise-normalized problem (error per unit of noise, the small-noise
limit) is implemented; the unnormalized variant adds no further content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapTooSmallError, InnerMinimizerUnboundedError
from .mapcalc import predict_nse
from .regularizers import L1
from .scalar_opt import golden_max, golden_min

CLOSED_FORM = "closed_form"
NESTED_SEARCH = "nested_search"

SADDLE_XTOL = 1e-9
_BETA_FLOOR = 1e-8
_GUARD_SCALE = 1e100


@dataclass
class SaddlePoint:
    """Saddle location and value; ``alpha_star`` squared is the predicted error."""

    alpha_star: float
    beta_star: float
    objective_value: float
    method: str


def _scaled_distance_term(geometry, lam, beta):
    """beta * sqrt(D(lam_b)/m) with overflow-guarded growth for beta -> 0+.

    For tiny beta the scale lam_b = lam/(beta*sqrt(m)) blows up; on the l1
    path D(t) equals k*(1 + t^2) exactly in floats once the tail terms
    underflow, so the product is computed algebraically there instead of
    through an overflowing intermediate.
    """
    m = geometry.m
    lam_b = lam / (beta * math.sqrt(m))
    if geometry.spec.kind == L1 and lam_b > _GUARD_SCALE:
        k = geometry.spec.k
        return math.sqrt(k * (beta * beta + lam * lam / m) / m)
    return beta * math.sqrt(geometry.D(lam_b) / m)


def d_tilde(geometry, lam, alpha, beta):
    """Evaluate the scalar saddle objective at (alpha, beta); beta must be > 0."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return (
        math.sqrt(alpha * alpha + 1.0) * beta
        - alpha * _scaled_distance_term(geometry, lam, beta)
        - 0.5 * beta * beta
    )


def inner_alpha_star(geometry, lam, beta):
    """Closed-form inner minimizer over alpha at fixed beta.

    Valid only while D(lam_b) < m; beyond that the inner minimization is
    unbounded and ``beta`` lies outside the neighborhood of the saddle.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    dv = geometry.D(lam / (beta * math.sqrt(geometry.m)))
    if dv >= geometry.m:
        raise InnerMinimizerUnboundedError(
            f"D = {dv:.6g} >= m = {geometry.m} at this beta; "
            "inner minimizer is unbounded"
        )
    return math.sqrt(dv / (geometry.m - dv))


def closed_form_saddle(geometry, lam):
    """Saddle point via the parameter-to-scale inverse; alpha* = sqrt(eta(lam))."""
    pred = predict_nse(geometry, lam)
    alpha = math.sqrt(pred.eta)
    beta = lam / (pred.tau * math.sqrt(geometry.m))
    value = d_tilde(geometry, lam, alpha, beta)
    return SaddlePoint(alpha_star=alpha, beta_star=beta, objective_value=value, method=CLOSED_FORM)


def _inner_max(geometry, lam, alpha, beta_cap):
    """max over beta in (0, beta_cap] of dt(alpha, .), expanding the cap as needed."""
    cap = beta_cap
    for _ in range(200):
        beta, value = golden_max(
            lambda b: d_tilde(geometry, lam, alpha, b), _BETA_FLOOR, cap, SADDLE_XTOL
        )
        if cap - beta > 16.0 * SADDLE_XTOL:
            return beta, value
        cap *= 2.0  # inner max sat at the cap: the cap is existence-only, double it
    raise CapTooSmallError("inner maximizer kept escaping the beta cap")


def solve_saddle_numeric(geometry, lam, alpha_cap, beta_cap):
    """Nested derivative-free search for the saddle of the scalar objective.

    Outer golden-section minimizes d(alpha) = max_beta dt(alpha, beta) over
    [0, alpha_cap]; the inner maximization is golden-section too (the
    objective is concave in beta).  The caps must be generous: a solution on
    the alpha cap raises, since a valid cap never binds.
    """
    if alpha_cap <= 0 or beta_cap <= 0:
        raise ValueError("caps must be positive")

    def outer(alpha):
        return _inner_max(geometry, lam, alpha, beta_cap)[1]

    alpha, value = golden_min(outer, 0.0, alpha_cap, SADDLE_XTOL)
    if alpha_cap - alpha <= 16.0 * SADDLE_XTOL:
        raise CapTooSmallError(
            f"numeric saddle sits on the alpha cap ({alpha_cap:g}); enlarge it"
        )
    beta, value = _inner_max(geometry, lam, alpha, beta_cap)
    return SaddlePoint(alpha_star=alpha, beta_star=beta, objective_value=value, method=NESTED_SEARCH)
