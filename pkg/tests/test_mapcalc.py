import math

import numpy as np
import pytest

from lassopred import (
    BelowPhaseTransitionError,
    BLOCK_L12,
    Geometry,
    L1,
    OutOfRegionError,
    RegularizerSpec,
    dc_closed_l1,
    map_inverse,
    map_tau,
    phase_diagnostics,
    predict_nse,
    q_tail,
    region,
    tune,
)


def geometry(n=1000, k=100, m=500):
    spec = RegularizerSpec(kind=L1, n=n, support=tuple(range(k)), signs=np.ones(k))
    return Geometry(spec=spec, m=m)


def map_formula_oracle(n, k, m, tau):
    """Independent re-implementation of the map from its definition."""
    q = float(q_tail(tau))
    bell = math.sqrt(2.0 / math.pi) * tau * math.exp(-0.5 * tau * tau)
    d = k * (1 + tau**2) + (n - k) * (2 * (1 + tau**2) * q - bell)
    c = -k * tau**2 + (n - k) * (bell - 2 * tau**2 * q)
    return tau * (m - d - c) / math.sqrt(m - d)


# ---------------------------------------------------------------- region


def test_region_against_dense_scan_oracle():
    n, k, m = 1000, 100, 500
    taus = np.arange(1e-4, 6.0, 1e-4)
    pairs = [dc_closed_l1(n, k, t) for t in taus]
    inside = np.array([m - p.D - max(0.0, p.C) > 0 for p in pairs])
    first, last = int(np.argmax(inside)), len(inside) - 1 - int(np.argmax(inside[::-1]))

    tau_lo, tau_hi = region(geometry(n, k, m))
    assert abs(tau_lo - taus[first]) <= 1e-4
    assert abs(tau_hi - taus[last]) <= 1e-4
    # frozen from a 200-step bisection oracle on the defining inequality
    assert tau_lo == pytest.approx(0.764709673786387, abs=1e-8)
    assert tau_hi == pytest.approx(1.971582744994134, abs=1e-8)


def test_region_defining_property_and_boundaries():
    geom = geometry()
    tau_lo, tau_hi = region(geom)
    m = geom.m
    for tau in np.linspace(tau_lo + 1e-6, tau_hi - 1e-6, 100):
        pair = geom.dc(tau)
        assert m - pair.D > max(0.0, pair.C)
    for tau in (tau_hi + 1e-6, tau_lo - 1e-6):
        pair = geom.dc(tau)
        assert not (m - pair.D > max(0.0, pair.C))


def test_region_starts_at_zero_when_m_exceeds_n():
    # with more measurements than dimensions the inequality already holds
    # at tau -> 0+ (D(0) = n < m), so the interval is anchored at 0
    geom = geometry(n=100, k=10, m=150)
    tau_lo, tau_hi = region(geom)
    assert tau_lo == 0.0
    assert tau_hi > 1.0


def test_below_phase_transition_raises():
    geom = geometry(n=1000, k=100, m=100)  # d_star ~ 328.8 > 100
    with pytest.raises(BelowPhaseTransitionError):
        region(geom)
    with pytest.raises(BelowPhaseTransitionError):
        tune(geom)
    with pytest.raises(BelowPhaseTransitionError):
        predict_nse(geom, 1.0)


# ---------------------------------------------------------------- map


def test_map_monotone_on_grid():
    geom = geometry()
    tau_lo, tau_hi = region(geom)
    taus = np.linspace(tau_lo + 1e-6, tau_hi - 1e-6, 200)
    vals = [map_tau(geom, t) for t in taus]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_map_matches_independent_formula():
    geom = geometry()
    tau_lo, tau_hi = region(geom)
    for tau in np.linspace(tau_lo + 0.05, tau_hi - 0.05, 7):
        assert map_tau(geom, tau) == pytest.approx(
            map_formula_oracle(1000, 100, 500, tau), rel=1e-12
        )


def test_map_out_of_region_raises():
    geom = geometry()
    tau_lo, tau_hi = region(geom)
    with pytest.raises(OutOfRegionError):
        map_tau(geom, tau_hi + 0.1)
    with pytest.raises(OutOfRegionError):
        map_tau(geom, max(tau_lo - 0.1, 1e-8))


def test_map_at_tau_best_equals_lam_best():
    geom = geometry()
    lam_best, tau_best, _ = tune(geom)
    # C vanishes at tau_best, so the map collapses to tau*sqrt(m - D)
    assert map_tau(geom, tau_best) == pytest.approx(lam_best, rel=1e-9)


def test_map_inverse_round_trip_and_monotonicity():
    geom = geometry()
    tau_lo, tau_hi = region(geom)
    taus = np.linspace(tau_lo + 0.01, tau_hi - 0.01, 25)
    lams = [map_tau(geom, t) for t in taus]
    for t, lam in zip(taus, lams):
        assert abs(map_inverse(geom, lam) - t) <= 1e-8
    invs = [map_inverse(geom, lam) for lam in sorted(lams)]
    assert all(a < b for a, b in zip(invs, invs[1:]))


def test_map_inverse_validates_lambda():
    geom = geometry()
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            map_inverse(geom, bad)


def test_map_inverse_consistent_with_tuning():
    geom = geometry()
    lam_best, tau_best, _ = tune(geom)
    assert abs(map_inverse(geom, lam_best) - tau_best) <= 1e-6


# ---------------------------------------------------------------- predictions


def test_predict_positive_and_minimax_at_best():
    geom = geometry()
    lam_best, tau_best, eta_min = tune(geom)
    d_star = geom.D(tau_best)
    assert eta_min == pytest.approx(d_star / (geom.m - d_star), rel=1e-12)
    pred = predict_nse(geom, lam_best)
    assert pred.eta == pytest.approx(eta_min, rel=1e-9)
    assert pred.eta > 0
    # frozen oracle values for (n=1000, m=500, k=100)
    assert lam_best == pytest.approx(14.918671932931822, rel=1e-8)
    assert eta_min == pytest.approx(1.9204499591256945, rel=1e-10)


def test_eta_curve_u_shaped_with_minimum_at_lam_best():
    geom = geometry()
    lam_best, _, eta_min = tune(geom)
    lams = np.geomspace(lam_best / 10, lam_best * 10, 51)  # lam_best at index 25
    etas = [predict_nse(geom, lam).eta for lam in lams]
    i = int(np.argmin(etas))
    assert i == 25
    assert all(e >= eta_min * (1.0 - 1e-12) for e in etas)
    # strictly decreasing then increasing
    assert all(a > b for a, b in zip(etas[:25], etas[1:26]))
    assert all(a < b for a, b in zip(etas[25:-1], etas[26:]))


def test_eta_continuous_in_lambda():
    geom = geometry()
    lam_best, _, _ = tune(geom)
    for lam in (0.3 * lam_best, lam_best, 4.0 * lam_best):
        base = predict_nse(geom, lam).eta
        for h in (1e-3, 1e-5, 1e-7):
            assert abs(predict_nse(geom, lam * (1 + h)).eta - base) <= 50.0 * h * max(base, 1.0)


def test_robust_for_all_lambda_when_above_transition():
    geom = geometry()
    lam_best, _, _ = tune(geom)
    import warnings

    for lam in (1e-6 * lam_best, 1e-2 * lam_best, 1e2 * lam_best, 1e6 * lam_best):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            pred = predict_nse(geom, lam)
        assert math.isfinite(pred.eta)
        assert pred.eta > 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert predict_nse(geom, 1e6 * lam_best).low_confidence


def test_consistency_triangle():
    geom = geometry()
    lam_best, tau_best, _ = tune(geom)
    assert map_tau(geom, tau_best) == pytest.approx(lam_best, abs=1e-9 * lam_best)
    lams = np.geomspace(lam_best / 3, lam_best * 3, 121)
    etas = [predict_nse(geom, lam).eta for lam in lams]
    grid_best = lams[int(np.argmin(etas))]
    assert abs(math.log(grid_best / lam_best)) <= math.log(lams[1] / lams[0]) + 1e-12


# ---------------------------------------------------------------- phase


def test_phase_diagnostics_thresholds():
    d_star, robust, minimax = phase_diagnostics(geometry(n=1000, k=100, m=500))
    assert robust and minimax == pytest.approx(1.9204499591256945, rel=1e-10)
    d_star2, robust2, minimax2 = phase_diagnostics(geometry(n=1000, k=100, m=100))
    assert d_star2 == pytest.approx(d_star, rel=1e-12)
    assert not robust2 and minimax2 == math.inf


def test_phase_minimax_one_at_twice_dstar():
    # duck geometry with non-integer m = 2 * d_star hits the algebraic point
    base = geometry(n=100, k=10, m=60)
    _, d_star, = [None, phase_diagnostics(base)[0]]

    class Duck:
        is_closed_form = True

        def __init__(self, m):
            self.m = m
            self._cache = {}

        def D(self, tau):
            return base.D(tau)

    d, robust, minimax = phase_diagnostics(Duck(2.0 * d_star))
    assert robust and minimax == pytest.approx(1.0, rel=1e-9)


def test_minimax_blows_up_toward_transition():
    base = geometry(n=1000, k=100, m=500)
    d_star = phase_diagnostics(base)[0]

    class Duck:
        is_closed_form = True

        def __init__(self, m):
            self.m = m
            self._cache = {}

        def D(self, tau):
            return base.D(tau)

    gaps = [1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4]
    vals = [phase_diagnostics(Duck(d_star * (1.0 + g)))[2] for g in gaps]
    assert all(a < b for a, b in zip(vals, vals[1:]))  # increases as m decreases
    assert vals[-1] > 1e3


# ---------------------------------------------------------------- Monte Carlo-backed geometry


def test_block_geometry_runs_through_the_pipeline():
    rng = np.random.default_rng(8)
    k, bsize, nblocks = 3, 4, 16
    dirs = rng.standard_normal((k, bsize))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    spec = RegularizerSpec(
        kind=BLOCK_L12, n=nblocks * bsize, support=(1, 5, 11), signs=dirs, block_size=bsize
    )
    geom = Geometry(spec=spec, m=48, mc_samples=20_000, mc_seed=12)
    lam_best, tau_best, eta_min = tune(geom)
    assert 0 < eta_min < 10
    tau_lo, tau_hi = region(geom)
    assert tau_lo < tau_best < tau_hi
    lam = map_tau(geom, tau_best * 1.05)
    assert abs(map_inverse(geom, lam) - tau_best * 1.05) <= 1e-6
    pred = predict_nse(geom, lam_best)
    assert pred.eta == pytest.approx(eta_min, rel=1e-6)


def test_geometry_validation_and_delta():
    geom = geometry(n=1000, k=100, m=500)
    assert geom.delta == 0.5
    assert geom.n == 1000
    with pytest.raises(ValueError):
        Geometry(spec=geom.spec, m=0)
