"""Derivative-free scalar searches used throughout the toolkit.

Golden-section and bisection are deliberately chosen over faster
derivative-based methods: the same code paths must serve Monte Carlo-backed
curves whose derivatives are not available, and the searches are cheap.
"""

from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 0.382...


def golden_min(f, lo, hi, xtol):
    """Minimize unimodal ``f`` on [lo, hi]; returns (x, f(x)) with |x - argmin| <= xtol."""
    a, b = float(lo), float(hi)
    h = b - a
    if h <= xtol:
        mid = 0.5 * (a + b)
        return mid, f(mid)
    x1 = a + _INVPHI2 * h
    x2 = a + _INVPHI * h
    f1, f2 = f(x1), f(x2)
    while h > xtol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            h = b - a
            x1 = a + _INVPHI2 * h
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            h = b - a
            x2 = a + _INVPHI * h
            f2 = f(x2)
    if f1 < f2:
        return x1, f1
    return x2, f2


def golden_max(f, lo, hi, xtol):
    """Maximize unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    x, neg = golden_min(lambda t: -f(t), lo, hi, xtol)
    return x, -neg


def bisect_sign_change(f, lo, hi, xtol):
    """Locate the sign change of ``f`` on [lo, hi] to absolute tolerance xtol.

    Requires f(lo) and f(hi) of opposite (non-strict) signs; returns the
    interval midpoint after shrinking.
    """
    a, b = float(lo), float(hi)
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise ValueError("bisection bracket does not change sign")
    while (b - a) > xtol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def bisect_increasing(f, lo, hi, target, rtol):
    """Solve f(x) = target for increasing ``f`` on [lo, hi] to relative x-tolerance."""
    a, b = float(lo), float(hi)
    while (b - a) > rtol * max(abs(a), abs(b), 1e-300):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:  # interval at float resolution
            break
        if f(mid) < target:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)
