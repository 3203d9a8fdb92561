"""Gaussian squared distance to the scaled subdifferential, and its correlation term.

For a standard Gaussian vector h and scale tau >= 0, define over the scaled
subdifferential S = tau * subdiff:

    D(tau) = E[ dist^2(h, S) ]           (expected squared distance)
    C(tau) = E[ (h - pi(h))^T pi(h) ]    (residual/projection correlation)

where pi is the Euclidean projection onto S.  These two scalars fully encode
the regularizer/signal pair in the error prediction.  They are tied together
by the identity

    dD/dtau = -(2/tau) * C(tau)   for tau > 0,

which doubles as a cross-check on any closed form.

For the l1 norm at a k-sparse signal both admit closed forms in the Gaussian
tail Q.  Derivations and the numerical cross-checks are in
docs/math_notes.md; common renditions of these formulas in the literature
circulate with typos, so the forms here are verified against the Monte Carlo
estimator and against the derivative identity above (see the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import NoInteriorMinimumError
from .regularizers import project_subdiff
from .scalar_opt import golden_min

CLOSED_FORM = "closed_form"
MONTE_CARLO = "monte_carlo"

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

# minimum search: tolerances per curve provenance, bracket expansion cutoff
D_MIN_XTOL_CLOSED = 1e-10
D_MIN_XTOL_MC = 1e-4
_BRACKET_LIMIT = 1e6

# Monte Carlo batching: rows per batch chosen so a batch stays ~30 MB
_MC_BATCH_ENTRIES = 4_000_000


@dataclass
class DistancePair:
    """A (D, C) evaluation at one scale, with provenance.

    ``stderr_D``/``stderr_C`` are standard errors of the means and are zero
    exactly when ``source`` is closed form.
    """

    tau: float
    D: float
    C: float
    stderr_D: float = 0.0
    stderr_C: float = 0.0
    source: str = CLOSED_FORM


def q_tail(t):
    """Gaussian tail Q(t) = P(N(0,1) > t), via erfc for full double precision."""
    return 0.5 * erfc(np.asarray(t, dtype=float) / math.sqrt(2.0))


def dc_closed_l1(n, k, tau):
    """Closed-form D(tau), C(tau) for the l1 norm at a k-sparse signal in R^n.

    On the support the subdifferential is a point, contributing k*(1 + tau^2)
    to D and -k*tau^2 to C.  Off the support each coordinate is clamped into
    [-tau, tau], contributing the Gaussian-tail terms:

        D(tau) = k (1 + tau^2)
               + (n - k) [ 2 (1 + tau^2) Q(tau) - sqrt(2/pi) tau e^{-tau^2/2} ]
        C(tau) = -k tau^2
               + (n - k) [ sqrt(2/pi) tau e^{-tau^2/2} - 2 tau^2 Q(tau) ]
    """
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n for a nondegenerate sparse structure (k={k}, n={n})")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    q = float(q_tail(tau))
    bell = _SQRT_2_OVER_PI * tau * math.exp(-0.5 * tau * tau)
    d = k * (1.0 + tau * tau) + (n - k) * (2.0 * (1.0 + tau * tau) * q - bell)
    c = -k * tau * tau + (n - k) * (bell - 2.0 * tau * tau * q)
    return DistancePair(tau=float(tau), D=d, C=c, source=CLOSED_FORM)


def dc_monte_carlo(spec, tau, samples, seed):
    """Estimate D(tau), C(tau) by projecting i.i.d. Gaussian draws.

    Draws come from substreams keyed by (seed, batch index), so the result is
    bit-reproducible for fixed arguments and batches could be farmed out to
    workers; the reduction is an ordered concatenation either way.  Works for
    any RegularizerSpec since it only consumes ``project_subdiff``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    rows_per_batch = max(1, _MC_BATCH_ENTRIES // spec.n)
    dist_sq = []
    cross = []
    drawn = 0
    batch_idx = 0
    while drawn < samples:
        rows = min(rows_per_batch, samples - drawn)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(batch_idx,)))
        h = rng.standard_normal((rows, spec.n))
        p = project_subdiff(spec, h, tau)
        r = h - p
        dist_sq.append(np.einsum("ij,ij->i", r, r))
        cross.append(np.einsum("ij,ij->i", r, p))
        drawn += rows
        batch_idx += 1
    dist_sq = np.concatenate(dist_sq)
    cross = np.concatenate(cross)

    def _stderr(vals):
        if len(vals) < 2:
            return 0.0
        return float(np.std(vals, ddof=1) / math.sqrt(len(vals)))

    return DistancePair(
        tau=float(tau),
        D=float(np.mean(dist_sq)),
        C=float(np.mean(cross)),
        stderr_D=_stderr(dist_sq),
        stderr_C=_stderr(cross),
        source=MONTE_CARLO,
    )


def d_min(geometry):
    """Locate the unique minimizer of D over tau >= 0.

    Returns ``(tau_best, d_min)``.  D is strictly convex with D(0) = n, so a
    golden-section search on an expanding bracket gets close; the bracket
    grows until D is increasing at its right edge.  Derivative-free on
    purpose: the same path serves Monte Carlo-backed curves.

    Comparing nearly-equal D values limits golden section to ~1e-7 of
    positional accuracy in doubles, so when the geometry also exposes C the
    result is polished by bisecting the stationarity sign change C(tau) = 0
    (C is positive left of the minimizer and negative right of it, which is
    the derivative identity in disguise).
    """
    dfun = lambda t: geometry.D(t)
    hi = 1.0
    while not dfun(hi) > dfun(0.5 * hi):
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise NoInteriorMinimumError(
                f"distance curve still decreasing at tau = {_BRACKET_LIMIT:g}; "
                "degenerate structure?"
            )
    xtol = D_MIN_XTOL_CLOSED if getattr(geometry, "is_closed_form", True) else D_MIN_XTOL_MC
    tau_best, d_best = golden_min(dfun, 0.0, hi, max(xtol, 1e-10))

    if hasattr(geometry, "C"):
        cfun = geometry.C
        window = 1e-4 * max(tau_best, 1.0)
        lo, hi2 = tau_best - window, tau_best + window
        for _ in range(30):
            if lo > 0.0 and cfun(lo) > 0.0 and cfun(hi2) < 0.0:
                polished = _bisect_stationary(cfun, lo, hi2)
                return polished, dfun(polished)
            window *= 2.0
            lo, hi2 = max(tau_best - window, 1e-12), tau_best + window
    return tau_best, d_best


def _bisect_stationary(cfun, lo, hi):
    """Bisect the sign change of C to float resolution."""
    while (hi - lo) > 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if cfun(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
