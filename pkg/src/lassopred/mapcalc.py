"""From distance curves to error predictions: the scale/parameter bijection.

With m measurements, the admissible scales form the open interval

    R = { tau > 0 : m - D(tau) > max(0, C(tau)) },

on which

    map(tau) = tau * (m - D(tau) - C(tau)) / sqrt(m - D(tau))

is a strictly increasing bijection onto (0, inf).  Its inverse converts a
regularization parameter lam into a scale tau, and the predicted asymptotic
normalized squared error is

    eta(lam) = D(tau) / (m - D(tau)),   tau = map^{-1}(lam).

All of this requires m to exceed the minimum of D; below that threshold the
interval R is empty and recovery is not robust for any parameter choice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from . import gauss
from .errors import BelowPhaseTransitionError, OutOfRegionError
from .regularizers import L1, RegularizerSpec
from .scalar_opt import bisect_increasing

REGION_XTOL = 1e-10
MAP_INVERSE_RTOL = 1e-12
# fraction of the region width treated as "at the boundary"
BOUNDARY_EPS_FRACTION = 1e-12


@dataclass
class Geometry:
    """Problem dimensions (n, m) paired with a regularizer structure.

    Distance evaluations are served from the l1 closed form when available
    and otherwise from Monte Carlo with common random numbers (the same
    ``mc_seed`` at every tau, so curves are deterministic functions of tau).
    Evaluations are memoized per scale; the cache is only ever grown, so
    concurrent readers under the GIL are safe.
    """

    spec: RegularizerSpec
    m: int
    mc_samples: int = 50_000
    mc_seed: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.m = int(self.m)
        if self.m < 1:
            raise ValueError("m must be a positive integer")

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def delta(self) -> float:
        return self.m / self.n

    @property
    def is_closed_form(self) -> bool:
        return self.spec.kind == L1

    def dc(self, tau) -> gauss.DistancePair:
        tau = float(tau)
        pair = self._cache.get(tau)
        if pair is None:
            if self.is_closed_form:
                pair = gauss.dc_closed_l1(self.n, self.spec.k, tau)
            else:
                pair = gauss.dc_monte_carlo(self.spec, tau, self.mc_samples, self.mc_seed)
            self._cache[tau] = pair
        return pair

    def D(self, tau) -> float:
        return self.dc(tau).D

    def C(self, tau) -> float:
        return self.dc(tau).C


@dataclass
class Prediction:
    """A (lam, tau, eta) triple with the admissible interval it lives in.

    ``low_confidence`` marks parameters so extreme that tau was resolved
    within float noise of a region endpoint; the value is still returned but
    sits outside the comfortable interior of the asymptotic theory.
    """

    lam: float
    tau: float
    eta: float
    tau_lo: float
    tau_hi: float
    low_confidence: bool = False


def _tau_best(geometry):
    cached = geometry._cache.get("_d_min")
    if cached is None:
        cached = gauss.d_min(geometry)
        geometry._cache["_d_min"] = cached
    return cached


def _require_robust(geometry):
    tau_best, d_star = _tau_best(geometry)
    if not geometry.m > d_star:
        raise BelowPhaseTransitionError(
            f"below the phase transition: m = {geometry.m} does not exceed "
            f"min over tau of D(tau) = {d_star:.6g}; robust recovery needs "
            "m > min D"
        )
    return tau_best, d_star


def _bisect_keep_inside(g, neg, pos, xtol):
    """Shrink a (g<=0, g>0) bracket; return the admissible (g>0) side.

    Returning the inside point rather than the midpoint keeps reported
    endpoints evaluable: m - D stays positive there, at the price of an
    inward bias below the tolerance.
    """
    while abs(pos - neg) > xtol:
        mid = 0.5 * (neg + pos)
        if g(mid) > 0.0:
            pos = mid
        else:
            neg = mid
    return pos


def region(geometry):
    """Endpoints (tau_lo, tau_hi) of the open admissible interval R.

    Each finite endpoint is located by bisection on
    g(tau) = m - D(tau) - max(0, C(tau)); tau_lo is 0 when g is already
    positive at tau = 1e-12.
    """
    cached = geometry._cache.get("_region")
    if cached is not None:
        return cached

    tau_best, _ = _require_robust(geometry)
    m = geometry.m

    def g(tau):
        pair = geometry.dc(tau)
        return m - pair.D - max(0.0, pair.C)

    probe = 1e-12
    if g(probe) > 0.0:
        tau_lo = 0.0
    else:
        tau_lo = _bisect_keep_inside(g, probe, tau_best, REGION_XTOL)

    hi = max(2.0 * tau_best, 1.0)
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e8:  # unreachable for valid specs: D grows at least quadratically
            raise OutOfRegionError("failed to bracket the upper region endpoint")
    tau_hi = _bisect_keep_inside(g, hi, tau_best, REGION_XTOL)

    geometry._cache["_region"] = (tau_lo, tau_hi)
    return tau_lo, tau_hi


def _map_value(geometry, tau):
    pair = geometry.dc(tau)
    return tau * (geometry.m - pair.D - pair.C) / math.sqrt(geometry.m - pair.D)


def map_tau(geometry, tau):
    """Evaluate the scale-to-parameter map at ``tau``; requires tau in R."""
    tau_lo, tau_hi = region(geometry)
    if not tau_lo < tau < tau_hi:
        raise OutOfRegionError(
            f"tau = {tau:.6g} outside the admissible interval "
            f"({tau_lo:.6g}, {tau_hi:.6g})"
        )
    return _map_value(geometry, tau)


def map_inverse(geometry, lam):
    """The unique tau in R with map(tau) = lam, by monotone bisection.

    Evaluation points are walked toward the open endpoints as needed for
    extreme ``lam``; when an endpoint is reached at float resolution the
    bracket is clamped there and a boundary-proximity warning is issued
    instead of extrapolating.
    """
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise ValueError(f"lam must be a finite positive scalar, got {lam!r}")
    tau_lo, tau_hi = region(geometry)
    width = tau_hi - tau_lo
    eps = BOUNDARY_EPS_FRACTION * width

    lo = tau_lo + eps
    while _map_value(geometry, lo) > lam:
        eps_lo = (lo - tau_lo) / 16.0
        nxt = tau_lo + eps_lo
        if nxt <= tau_lo or nxt == lo:
            warnings.warn(
                "requested parameter is at the lower region boundary; "
                "returning the boundary-clamped scale",
                RuntimeWarning,
            )
            return lo
        lo = nxt

    hi = tau_hi - eps
    while _map_value(geometry, hi) < lam:
        eps_hi = (tau_hi - hi) / 16.0
        nxt = tau_hi - eps_hi
        if nxt >= tau_hi or nxt == hi:
            warnings.warn(
                "requested parameter is at the upper region boundary; "
                "returning the boundary-clamped scale",
                RuntimeWarning,
            )
            return hi
        hi = nxt

    return bisect_increasing(
        lambda t: _map_value(geometry, t), lo, hi, lam, MAP_INVERSE_RTOL
    )


def predict_nse(geometry, lam):
    """Predicted asymptotic normalized squared error at parameter ``lam``."""
    tau = map_inverse(geometry, lam)
    tau_lo, tau_hi = region(geometry)
    pair = geometry.dc(tau)
    eta = pair.D / (geometry.m - pair.D)
    margin = 2.0 * BOUNDARY_EPS_FRACTION * (tau_hi - tau_lo)
    low_conf = (tau - tau_lo) <= margin or (tau_hi - tau) <= margin
    return Prediction(
        lam=float(lam), tau=tau, eta=eta, tau_lo=tau_lo, tau_hi=tau_hi,
        low_confidence=low_conf,
    )


def tune(geometry):
    """Optimal parameter: returns (lam_best, tau_best, eta_min).

    The minimizer tau_best of D gives lam_best = tau_best * sqrt(m - D_min)
    and the minimax error eta_min = D_min / (m - D_min).
    """
    tau_best, d_star = _require_robust(geometry)
    lam_best = tau_best * math.sqrt(geometry.m - d_star)
    eta_min = d_star / (geometry.m - d_star)
    return lam_best, tau_best, eta_min


def phase_diagnostics(geometry):
    """Robustness summary: returns (d_star, robust, minimax_nse).

    ``minimax_nse`` is the best achievable asymptotic error over all
    parameter choices, and is ``inf`` when m does not exceed d_star (no
    parameter gives robust recovery).
    """
    _, d_star = _tau_best(geometry)
    robust = geometry.m > d_star
    minimax = d_star / (geometry.m - d_star) if robust else math.inf
    return d_star, robust, minimax
